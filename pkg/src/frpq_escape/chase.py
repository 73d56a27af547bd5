"""Regular constraints, requests, the Add step and the counterexample validator."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import NotInLanguageError, StaleRequestError
from .language import PathLanguage, color, eval_matrix, holds, witness_path
from .structure import Structure
from .symbols import Label, format_word

GREEN_TO_RED = "->"
RED_TO_GREEN = "<-"


@dataclass(frozen=True, eq=False)
class RegularConstraint:
    """``L^->`` (green body, red head) or ``L^<-`` (red body, green head) for a base ``L``."""

    base: PathLanguage
    direction: str
    group: str = ""
    index: int = 0

    def __post_init__(self):
        if self.direction not in (GREEN_TO_RED, RED_TO_GREEN):
            raise ValueError(f"direction must be '->' or '<-', got {self.direction!r}")
        if self.base.colorspace != "Base":
            raise ValueError("a regular constraint is built from a base language")

    @cached_property
    def body(self) -> PathLanguage:
        return color(self.base, "G" if self.direction == GREEN_TO_RED else "R")

    @cached_property
    def head(self) -> PathLanguage:
        return color(self.base, "R" if self.direction == GREEN_TO_RED else "G")

    @property
    def name(self) -> str:
        tag = f"{self.group}{self.index}" if self.group else (self.base.name or "L")
        return f"{tag}{self.direction}"

    def __repr__(self) -> str:
        return f"<RC {self.name}>"


def both_directions(base: PathLanguage, group: str = "", index: int = 0) -> tuple[RegularConstraint, RegularConstraint]:
    return (
        RegularConstraint(base, GREEN_TO_RED, group, index),
        RegularConstraint(base, RED_TO_GREEN, group, index),
    )


@dataclass(frozen=True)
class Request:
    u: int
    v: int
    constraint: RegularConstraint = field(compare=False)
    rank: int = 0  # position of the constraint in the list it was computed from

    def key(self) -> tuple:
        return (self.rank, self.u, self.v)

    def __eq__(self, other):
        return isinstance(other, Request) and (self.u, self.v) == (other.u, other.v) and self.constraint is other.constraint

    def __hash__(self):
        return hash((self.u, self.v, id(self.constraint)))

    def __repr__(self) -> str:
        return f"<Request {self.constraint.name} ({self.u},{self.v})>"


def requests(
    constraints: Sequence[RegularConstraint], d: Structure, sources: Sequence[int] | None = None
) -> list[Request]:
    """All ``<u, v, t>`` with ``body(t)(u, v)`` true and ``head(t)(u, v)`` false.

    Sorted by (position of ``t`` in ``constraints``, u, v).  ``sources`` restricts
    ``u`` (used when only requests at the constant ``a`` matter).
    """
    out: list[Request] = []
    rows = d.vertices if sources is None else tuple(sources)
    for rank, t in enumerate(constraints):
        body = eval_matrix(t.body, d, sources)
        if not body.any():
            continue
        pending = body & ~eval_matrix(t.head, d, sources)
        ri, ci = np.nonzero(pending)
        pairs = sorted((rows[i], d.vertices[j]) for i, j in zip(ri.tolist(), ci.tolist()))
        out.extend(Request(u, v, t, rank) for u, v in pairs)
    return out


def is_pending(d: Structure, r: Request) -> bool:
    t = r.constraint
    return holds(t.body, d, r.u, r.v) and not holds(t.head, d, r.u, r.v)


def add_path(d: Structure, r: Request, word: Sequence[Label]) -> tuple[Structure, tuple[int, ...]]:
    """Serve ``r`` with ``word``; returns the grown structure and the fresh vertex ids."""
    if not r.constraint.head.accepts(word):
        raise NotInLanguageError(f"{format_word(word)} is not in the head of {r.constraint.name}")
    if holds(r.constraint.head, d, r.u, r.v):
        raise StaleRequestError(f"{r} is already satisfied")
    if not holds(r.constraint.body, d, r.u, r.v):
        raise StaleRequestError(f"{r} has no body path")
    return d.add_path(r.u, r.v, tuple(word))


def add(d: Structure, r: Request, word: Sequence[Label]) -> Structure:
    return add_path(d, r, word)[0]


def satisfies(d: Structure, constraints: Sequence[RegularConstraint]) -> bool:
    return not requests(constraints, d)


@dataclass
class Verdict:
    valid: bool
    clause: str = ""
    reason: str = ""
    witness: object = None

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        return "Valid" if self.valid else f"Invalid({self.clause}: {self.reason})"

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, Request):
            w = {"constraint": w.constraint.name, "u": w.u, "v": w.v}
        elif isinstance(w, list):
            w = [{"src": e.src, "dst": e.dst, "label": str(e.label)} for e in w]
        return {"verdict": "Valid" if self.valid else "Invalid", "clause": self.clause, "reason": self.reason, "witness": w}


def validate_counterexample(
    m: Structure, q: Iterable[PathLanguage] | Sequence[RegularConstraint], q0: PathLanguage
) -> Verdict:
    """Check the three clauses: all constraints hold, G(q0)(a,b) holds, R(q0)(a,b) fails.

    ``q`` may be base languages (both directions are used) or ready-made constraints.
    """
    q = list(q)
    constraints: list[RegularConstraint] = []
    for item in q:
        if isinstance(item, RegularConstraint):
            constraints.append(item)
        else:
            constraints.extend(both_directions(item))
    pending = requests(constraints, m)
    if pending:
        r = pending[0]
        return Verdict(False, "constraints", f"unserved request {r.constraint.name} at ({r.u},{r.v})", r)
    g0, r0 = color(q0, "G"), color(q0, "R")
    if not holds(g0, m, m.a, m.b):
        return Verdict(False, "green", "no green Q0 path from a to b", (m.a, m.b))
    if holds(r0, m, m.a, m.b):
        path = witness_path(r0, m, m.a, m.b)
        return Verdict(False, "red", "a red Q0 path joins a and b", path)
    return Verdict(True)
