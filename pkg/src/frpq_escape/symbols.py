"""Alphabet of the reduction: symbols, red/green edge labels and wildcard patterns.

A base symbol is one of ``alpha``, ``x``, ``y``, ``dollar``, ``omega`` or a grid
symbol ``(letter, orientation, temperature, shade)``.  Edges of a structure carry a
:class:`Label`, i.e. a symbol written in green (``"G"``) or red (``"R"``) ink.

A :class:`Pattern` has the same components as a label, but any component may be
``None`` meaning "anything".  Languages are automata whose transitions carry
patterns, so a language over a large shaded alphabet stays small.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Sequence

KINDS = ("alpha", "x", "y", "dollar", "omega", "grid")
TEMPS = ("C", "W")
LETTERS = ("A", "B")
ORIENTS = ("H", "V")
COLORS = ("G", "R")

_KIND_RANK = {k: i for i, k in enumerate(KINDS)}
_PLAIN_TEXT = {"alpha": "alpha", "x": "x", "y": "y", "dollar": "$", "omega": "omega"}
_TEXT_KIND = {v: k for k, v in _PLAIN_TEXT.items()}


@dataclass(frozen=True, slots=True)
class Symbol:
    """A letter of the base alphabet.

    ``shade`` may be ``None`` for grid symbols in shade-blind structures (the
    fixtures watched "without shades"); such a symbol only matches patterns whose
    shade is a wildcard.
    """

    kind: str
    temp: str | None = None
    letter: str | None = None
    orient: str | None = None
    shade: str | None = None

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind == "omega":
            if self.temp is not None:
                raise ValueError("omega carries no temperature")
        elif self.temp not in TEMPS:
            raise ValueError(f"{self.kind} needs a temperature in {TEMPS}, got {self.temp!r}")
        if self.kind == "grid":
            if self.letter not in LETTERS or self.orient not in ORIENTS:
                raise ValueError(f"grid symbol needs letter and orientation, got {self!r}")
        elif (self.letter, self.orient, self.shade) != (None, None, None):
            raise ValueError(f"only grid symbols carry letter/orientation/shade: {self!r}")

    @property
    def is_grid(self) -> bool:
        return self.kind == "grid"

    @property
    def warm(self) -> bool:
        return self.temp == "W"

    @property
    def cold(self) -> bool:
        return self.temp == "C"

    def sort_key(self) -> tuple:
        # kind order, then Cold<Warm, A<B, H<V, shade (unshaded first)
        return (
            _KIND_RANK[self.kind],
            self.temp or "",
            self.letter or "",
            self.orient or "",
            (self.shade is not None, self.shade or ""),
        )

    def erase_shade(self) -> Symbol:
        return replace(self, shade=None) if self.shade is not None else self

    def with_shade(self, shade: str | None) -> Symbol:
        return replace(self, shade=shade) if self.is_grid else self

    def __str__(self) -> str:
        if self.kind == "grid":
            text = f"{self.letter}_{self.orient}^{self.temp}"
            return f"{text}:{self.shade}" if self.shade is not None else text
        if self.kind == "omega":
            return "omega"
        return f"{_PLAIN_TEXT[self.kind]}^{self.temp}"

    @classmethod
    def parse(cls, text: str) -> Symbol:
        """Inverse of ``str``: ``"alpha^W"``, ``"omega"``, ``"A_H^C:gray"``."""
        if text == "omega":
            return cls("omega")
        shade = None
        if ":" in text:
            text, shade = text.split(":", 1)
        head, _, temp = text.partition("^")
        if head in _TEXT_KIND:
            if shade is not None:
                raise ValueError(f"non-grid symbol with shade: {text!r}")
            return cls(_TEXT_KIND[head], temp)
        letter, _, orient = head.partition("_")
        return cls("grid", temp, letter, orient, shade)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "temp": self.temp,
            "letter": self.letter,
            "orient": self.orient,
            "shade": self.shade,
        }

    @classmethod
    def from_json(cls, obj: dict) -> Symbol:
        return cls(obj["kind"], obj.get("temp"), obj.get("letter"), obj.get("orient"), obj.get("shade"))


@dataclass(frozen=True, slots=True)
class Label:
    """A symbol written in green or red ink; every edge carries exactly one."""

    symbol: Symbol
    color: str

    def __post_init__(self):
        if self.color not in COLORS:
            raise ValueError(f"edge color must be 'G' or 'R', got {self.color!r}")

    def sort_key(self) -> tuple:
        return (self.symbol.sort_key(), self.color)

    def recolor(self, color: str) -> Label:
        return Label(self.symbol, color)

    def erase_shade(self) -> Label:
        return Label(self.symbol.erase_shade(), self.color)

    def __str__(self) -> str:
        return f"{self.color}:{self.symbol}"

    @classmethod
    def parse(cls, text: str) -> Label:
        color, _, sym = text.partition(":")
        return cls(Symbol.parse(sym), color)


Word = tuple  # tuple[Label, ...] or tuple[Symbol, ...] for base words


def green(*symbols: Symbol) -> tuple[Label, ...]:
    return tuple(Label(s, "G") for s in symbols)


def red(*symbols: Symbol) -> tuple[Label, ...]:
    return tuple(Label(s, "R") for s in symbols)


def format_word(word: Sequence) -> str:
    return " ".join(str(x) for x in word)


def parse_word(text: str) -> tuple[Label, ...]:
    return tuple(Label.parse(tok) for tok in text.split())


# constructors for the plain symbols; used all over the fixtures and tests
def alpha(t: str) -> Symbol:
    return Symbol("alpha", t)


def x(t: str) -> Symbol:
    return Symbol("x", t)


def y(t: str) -> Symbol:
    return Symbol("y", t)


def dollar(t: str) -> Symbol:
    return Symbol("dollar", t)


OMEGA = Symbol("omega")


def grid(letter: str, orient: str, temp: str, shade: str | None = None) -> Symbol:
    return Symbol("grid", temp, letter, orient, shade)


def alphabet(shades: Iterable[str]) -> list[Symbol]:
    """All symbols of the base alphabet for a shade set, in the fixed symbol order."""
    plain = [Symbol(k, t) for k in ("alpha", "x", "y", "dollar") for t in TEMPS] + [OMEGA]
    gridsyms = [grid(l, o, t, s) for l in LETTERS for o in ORIENTS for t in TEMPS for s in shades]
    return sorted(plain + gridsyms, key=Symbol.sort_key)


@dataclass(frozen=True, slots=True)
class Pattern:
    """A set of symbols (or labels) given componentwise; ``None`` is a wildcard.

    ``color`` is ``None`` for patterns over the base alphabet and ``"G"``/``"R"``
    for patterns over the colored alphabet; it is never a wildcard.
    """

    kind: str | None = None
    temp: str | None = None
    letter: str | None = None
    orient: str | None = None
    shade: str | None = None
    color: str | None = None

    def __post_init__(self):
        if self.kind is not None and self.kind not in _KIND_RANK:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.color is not None and self.color not in COLORS:
            raise ValueError(f"bad color {self.color!r}")
        grid_only = (self.letter, self.orient, self.shade) != (None, None, None)
        if grid_only and self.kind not in (None, "grid"):
            raise ValueError(f"pattern denotes no symbol: {self!r}")
        if self.kind == "omega" and self.temp is not None:
            raise ValueError("omega pattern with a temperature denotes no symbol")
        if grid_only and self.kind is None:
            # letter/orient/shade constraints only make sense on grid symbols
            object.__setattr__(self, "kind", "grid")

    def matches_symbol(self, s: Symbol) -> bool:
        return (
            (self.kind is None or self.kind == s.kind)
            and (self.temp is None or self.temp == s.temp)
            and (self.letter is None or self.letter == s.letter)
            and (self.orient is None or self.orient == s.orient)
            and (self.shade is None or self.shade == s.shade)
        )

    def matches(self, label: Label) -> bool:
        return _match(self, label)

    def symbols(self, shades: Iterable[str]) -> list[Symbol]:
        """The concrete base symbols this pattern denotes, in symbol order."""
        return [s for s in alphabet(shades) if self.matches_symbol(s)]

    def recolor(self, color: str | None) -> Pattern:
        return replace(self, color=color)

    def erase_shade(self) -> Pattern:
        return replace(self, shade=None)

    def __str__(self) -> str:
        if self.kind is None:
            text = "Σ" if self.temp is None else f"Σ^{self.temp}"
        elif self.kind == "grid":
            text = f"{self.letter or '•'}_{self.orient or '*'}^{self.temp or '*'}"
            if self.shade is not None:
                text += f":{self.shade}"
        elif self.kind == "omega":
            text = "omega"
        else:
            text = f"{_PLAIN_TEXT[self.kind]}^{self.temp or '*'}"
        return f"{self.color}:{text}" if self.color else text

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "temp": self.temp,
            "letter": self.letter,
            "orient": self.orient,
            "shade": self.shade,
            "color": self.color,
        }

    @classmethod
    def from_json(cls, obj: dict) -> Pattern:
        return cls(**{k: obj.get(k) for k in ("kind", "temp", "letter", "orient", "shade", "color")})

    @classmethod
    def of(cls, s: Symbol, color: str | None = None) -> Pattern:
        """The pattern denoting exactly ``s`` (a wildcard shade stays a wildcard)."""
        return cls(s.kind, s.temp, s.letter, s.orient, s.shade, color)


@lru_cache(maxsize=1 << 16)
def _match(p: Pattern, label: Label) -> bool:
    return p.color == label.color and p.matches_symbol(label.symbol)


def temperature_consistent(label: Label) -> bool:
    """Red ink on warm symbols, green ink on cold ones (omega is exempt)."""
    t = label.symbol.temp
    if t is None:
        return True
    return (label.color == "R") == (t == "W")
