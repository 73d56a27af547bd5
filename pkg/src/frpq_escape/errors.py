"""Exception types shared across the package."""
from __future__ import annotations


class ColorspaceError(ValueError):
    """Languages of different colorspaces combined, or a colored language recolored."""


class NotInLanguageError(ValueError):
    """A word offered to ``add`` is not in the head language of the request."""


class StaleRequestError(ValueError):
    """The request's head already holds, so there is nothing to serve."""


class InvalidInstanceError(ValueError):
    """A tiling instance violates its invariants (shade set, forbidden pairs)."""


class LemmaShapeMismatch(AssertionError):
    """A forced structure differs from the fixture it should match."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}
