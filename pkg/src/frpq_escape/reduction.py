"""The reduction from tiling instances to path-query instances, and crocodile strategies.

Languages are written with shade wildcards: every grid symbol without an explicit
shade stands for all shades, as in the typeset definitions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .chase import RegularConstraint, both_directions
from .language import (
    PathLanguage,
    color,
    concat,
    concat_opt,
    from_pattern,
    from_patterns,
    sigma_upto,
    union_all,
)
from .symbols import Pattern, alphabet
from .tiling import TilingInstance


def _p(kind: str, temp: str | None = None) -> Pattern:
    return Pattern(kind, temp)


def _g(letter: str | None, orient: str | None, temp: str | None, shade: str | None = None) -> Pattern:
    return Pattern("grid", temp, letter, orient, shade)


ALPHA_C, ALPHA_W = _p("alpha", "C"), _p("alpha", "W")
X_C, X_W = _p("x", "C"), _p("x", "W")
Y_C, Y_W = _p("y", "C"), _p("y", "W")
D_C, D_W = _p("dollar", "C"), _p("dollar", "W")
OMEGA = _p("omega")
COLD_GRID = [_g("A", "H", "C"), _g("B", "H", "C"), _g("A", "V", "C"), _g("B", "V", "C")]


def good_languages(shades: tuple[str, ...]) -> list[PathLanguage]:
    def L(*alternatives: list[Pattern]) -> PathLanguage:
        return union_all([from_patterns(alt, shades) for alt in alternatives])

    cold_any = [[p] for p in COLD_GRID]
    langs = [
        L([OMEGA]),
        L([ALPHA_C], [ALPHA_W]),
        L([X_C], [X_W]),
        L([Y_C], [Y_W]),
        L([D_C], [D_W]),
        L([_g("B", "V", "C")], [_g("B", "V", "W")]),
        L([_g("B", "H", "W")], [_g("B", "H", "C")]),
        L([_g("A", "V", "W")], [_g("A", "V", "C")]),
        L([_g("A", "H", "C")], [_g("A", "H", "W")]),
        L([_g("B", "H", "W"), _g("A", "V", "W")], [_g("B", "V", "C"), _g("A", "H", "C")]),
        L([_g("A", "H", "C"), _g("B", "V", "C")], [_g("A", "V", "W"), _g("B", "H", "W")]),
        L(*[[X_C, p] for p in COLD_GRID], [X_C], [X_W]),
        L(*[[p, Y_C] for p in COLD_GRID], [Y_C], [Y_W]),
        L([X_W], [X_C], [X_C, _g("A", "H", "C"), _g("B", "V", "C")]),
        L([Y_W], [D_C], [_g("A", "H", "C"), _g("B", "V", "C"), Y_C], [_g("B", "V", "C"), Y_C]),
    ]
    return [l.rename(f"good{i}") for i, l in enumerate(langs, 1)]


def bad_languages(inst: TilingInstance) -> tuple[list[PathLanguage], list[str]]:
    """One language per forbidden pair, then one per non-black shade; with descriptions."""
    shades = inst.shades
    langs, notes = [], []
    for (d, s), (d2, s2) in sorted(inst.forbidden):
        langs.append(from_patterns([ALPHA_W, X_W, _g(None, d, "W", s), _g(None, d2, "W", s2), Y_W, OMEGA], shades))
        notes.append(f"forbidden pair ({d},{s}) ({d2},{s2})")
    for s in shades:
        if s != "black":
            langs.append(from_patterns([ALPHA_W, X_W, _g("B", "V", "W", s), D_W, OMEGA], shades))
            notes.append(f"dollar after non-black shade {s}")
    return [l.rename(f"bad{i}") for i, l in enumerate(langs, 1)], notes


def ugly_languages(shades: tuple[str, ...]) -> list[PathLanguage]:
    sigma = sigma_upto(4, shades)

    def sandwich(first: Pattern, middle: Pattern) -> PathLanguage:
        # first Σ^{≤4} middle Σ^{≤4} ω, where Σ^{≤4} includes the empty word
        head = concat_opt(from_pattern(first, shades), sigma)
        body = concat_opt(concat(head, from_pattern(middle, shades)), sigma)
        return concat(body, from_pattern(OMEGA, shades))

    u1 = sandwich(ALPHA_C, _g(None, None, "W"))
    u2 = sandwich(ALPHA_W, _g(None, None, "C"))
    u3 = from_patterns([ALPHA_C, X_C, _g("B", "V", "C"), _g("B", "V", "C"), Y_C, OMEGA], shades)
    return [l.rename(f"ugly{i}") for i, l in enumerate((u1, u2, u3), 1)]


def start_language(shades: tuple[str, ...]) -> PathLanguage:
    return from_patterns([ALPHA_C, X_C, _g("A", "H", "C", "gray"), _g("B", "V", "C"), Y_C, OMEGA], shades, "start")


@dataclass(eq=False)
class ReductionOutput:
    instance: TilingInstance
    good: list[PathLanguage]
    bad: list[PathLanguage]
    ugly: list[PathLanguage]
    q_start: PathLanguage
    q0: PathLanguage
    bad_notes: list[str] = field(default_factory=list)

    @property
    def shades(self) -> tuple[str, ...]:
        return self.instance.shades

    @property
    def alphabet(self) -> list:
        return alphabet(self.shades)

    def tagged(self) -> list[tuple[str, int, PathLanguage]]:
        """All view languages as (group, 1-based index, language)."""
        out = [("good", i, l) for i, l in enumerate(self.good, 1)]
        out += [("bad", i, l) for i, l in enumerate(self.bad, 1)]
        out += [("ugly", i, l) for i, l in enumerate(self.ugly, 1)]
        return out

    @property
    def languages(self) -> list[PathLanguage]:
        return [l for _, _, l in self.tagged()]

    def language(self, group: str, index: int) -> PathLanguage:
        return {"good": self.good, "bad": self.bad, "ugly": self.ugly}[group][index - 1]

    @cached_property
    def _constraints(self) -> dict[tuple[str, int], tuple[RegularConstraint, RegularConstraint]]:
        return {(g, i): both_directions(l, g, i) for g, i, l in self.tagged()}

    def constraints_of(self, group: str, index: int) -> tuple[RegularConstraint, RegularConstraint]:
        return self._constraints[(group, index)]

    def constraints(self, groups: tuple[str, ...] = ("good", "bad", "ugly")) -> list[RegularConstraint]:
        return [t for (g, _), pair in self._constraints.items() if g in groups for t in pair]

    @cached_property
    def green_q0(self) -> PathLanguage:
        return color(self.q0, "G")

    @cached_property
    def red_q0(self) -> PathLanguage:
        return color(self.q0, "R")

    @cached_property
    def green_start(self) -> PathLanguage:
        return color(self.q_start, "G")

    def summary(self) -> dict:
        return {
            "shades": list(self.shades),
            "alphabet_size": len(self.alphabet),
            "good": len(self.good),
            "bad": len(self.bad),
            "ugly": len(self.ugly),
            "forbidden_pairs": len(self.instance.forbidden),
        }

    def to_json(self) -> dict:
        return {
            "instance": self.instance.to_json(),
            "alphabet": [s.to_json() for s in self.alphabet],
            "languages": [
                {"group": g, "index": i, "automaton": l.to_json()} for g, i, l in self.tagged()
            ],
            "bad_notes": self.bad_notes,
            "q_start": self.q_start.to_json(),
            "q0": self.q0.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> ReductionOutput:
        inst = TilingInstance.from_json(obj["instance"])
        groups: dict[str, list] = {"good": [], "bad": [], "ugly": []}
        for rec in sorted(obj["languages"], key=lambda r: (r["group"], r["index"])):
            groups[rec["group"]].append(PathLanguage.from_json(rec["automaton"]))
        return cls(
            inst,
            groups["good"],
            groups["bad"],
            groups["ugly"],
            PathLanguage.from_json(obj["q_start"]),
            PathLanguage.from_json(obj["q0"]),
            list(obj.get("bad_notes", [])),
        )


def reduce(inst: TilingInstance) -> ReductionOutput:
    shades = inst.shades
    good = good_languages(shades)
    bad, notes = bad_languages(inst)
    ugly = ugly_languages(shades)
    q_start = start_language(shades)
    q0 = union_all([q_start, *ugly, *bad], "Q0")
    return ReductionOutput(inst, good, bad, ugly, q_start, q0, notes)


# -- crocodile strategies ------------------------------------------------------------

S_COLOR = (3, 4, 5, 6, 7, 8, 9)
S_CYCLE = (15, 14) + S_COLOR + (12, 13) + S_COLOR
S_START = (1, 2) + S_CYCLE
S_ODD = (11,) + S_COLOR + (12, 13) + S_COLOR
S_EVEN = (10,) + S_COLOR + (12, 13) + S_COLOR


def s_k(k: int) -> tuple[int, ...]:
    """``S_1 = S_start`` and ``S_k = S_{k-1} ++ S_cycle``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return S_START + S_CYCLE * (k - 1)


def s_layer(k: int) -> tuple[int, ...]:
    """``S_layer^k``: the odd/even layer strategies alternating, odd first."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out: tuple[int, ...] = ()
    for j in range(1, k + 1):
        out += S_ODD if j % 2 else S_EVEN
    return out


def named_strategies(k: int = 1) -> dict[str, tuple[int, ...]]:
    return {
        "S_color": S_COLOR,
        "S_cycle": S_CYCLE,
        "S_start": S_START,
        "S_k": s_k(k),
        "S_odd": S_ODD,
        "S_even": S_EVEN,
        "S_layer": s_layer(k),
    }


def strategy_by_name(text: str) -> tuple[int, ...]:
    """Parse ``S_start``, ``S_k(3)``, ``S_layer(2)``, ``S_3+S_layer(3)`` or ``1,2,15``."""
    text = text.strip()
    if "+" in text:
        out: tuple[int, ...] = ()
        for part in text.split("+"):
            out += strategy_by_name(part)
        return out
    if text and text[0].isdigit():
        return tuple(int(t) for t in text.replace(" ", "").split(","))
    fixed = {"S_color": S_COLOR, "S_cycle": S_CYCLE, "S_start": S_START, "S_odd": S_ODD, "S_even": S_EVEN}
    if text in fixed:
        return fixed[text]
    for prefix, fn in (("S_k(", s_k), ("S_layer(", s_layer)):
        if text.startswith(prefix) and text.endswith(")"):
            return fn(int(text[len(prefix):-1]))
    if text.startswith("S_") and text[2:].isdigit():
        return s_k(int(text[2:]))
    raise ValueError(f"unknown strategy {text!r}")
