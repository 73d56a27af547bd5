"""The grid tiling problem: instances, square grids, shadings, checking and search.

Grid vertices are pairs ``(i, j)`` with ``0 <= i, j <= k``; ``i`` grows to the
right and ``j`` grows upwards.  An edge is a pair of its endpoints.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidInstanceError

ALL_CONDITIONS = ("a1", "a2", "b1", "b2", "b3")
REFUTATION_CONDITIONS = ("a1", "a2", "b1", "b3")

Point = tuple[int, int]
GridEdge = tuple[Point, Point]
EdgeLabel = tuple[str, str]  # (orientation, shade)


@dataclass(frozen=True)
class TilingInstance:
    shades: tuple[str, ...]
    forbidden: frozenset[tuple[EdgeLabel, EdgeLabel]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "shades", tuple(sorted(set(self.shades))))
        object.__setattr__(self, "forbidden", frozenset((tuple(c), tuple(d)) for c, d in self.forbidden))
        if "gray" not in self.shades or "black" not in self.shades:
            raise InvalidInstanceError("the shade set must contain 'gray' and 'black'")
        for pair in self.forbidden:
            for o, s in pair:
                if o not in ("H", "V") or s not in self.shades:
                    raise InvalidInstanceError(f"bad forbidden pair {pair}")

    @classmethod
    def all_pairs(cls, shades: Iterable[str]) -> TilingInstance:
        labels = [(o, s) for o in ("H", "V") for s in sorted(shades)]
        return cls(tuple(shades), frozenset(itertools.product(labels, labels)))

    def to_json(self) -> dict:
        return {
            "shades": list(self.shades),
            "forbidden": [[list(c), list(d)] for c, d in sorted(self.forbidden)],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> TilingInstance:
        if not isinstance(obj.get("shades"), list):
            raise InvalidInstanceError("instance needs a 'shades' list")
        forb = frozenset((tuple(c), tuple(d)) for c, d in obj.get("forbidden", []))
        return cls(tuple(obj["shades"]), forb)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def grid_edges(k: int) -> list[GridEdge]:
    """Edges of the ``[k] x [k]`` grid, row by row from the bottom, left to right."""
    out = []
    for j in range(k + 1):
        for i in range(k + 1):
            if i < k:
                out.append(((i, j), (i + 1, j)))
            if j < k:
                out.append(((i, j), (i, j + 1)))
    return out


def is_horizontal(e: GridEdge) -> bool:
    return e[1][1] == e[0][1]


def two_paths(k: int) -> list[tuple[GridEdge, GridEdge]]:
    """All directed paths of length 2, any mix of orientations."""
    edges = grid_edges(k)
    by_src: dict[Point, list[GridEdge]] = {}
    for e in edges:
        by_src.setdefault(e[0], []).append(e)
    return [(e, f) for e in edges for f in by_src.get(e[1], [])]


@dataclass(frozen=True)
class GridShading:
    k: int
    labels: Mapping[GridEdge, EdgeLabel] = field(hash=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("grid side must be >= 1")
        missing = set(grid_edges(self.k)) - set(self.labels)
        if missing:
            raise ValueError(f"shading is not total, e.g. {sorted(missing)[0]} has no label")

    def shade_at(self, i: int, j: int, orient: str) -> str:
        """Shade of the grid edge leaving ``(i, j)`` rightwards (H) or upwards (V)."""
        dst = (i + 1, j) if orient == "H" else (i, j + 1)
        return self.labels[((i, j), dst)][1]

    def __call__(self, i: int, j: int, orient: str) -> str:
        return self.shade_at(i, j, orient)

    def with_label(self, e: GridEdge, label: EdgeLabel) -> GridShading:
        labels = dict(self.labels)
        labels[e] = label
        return GridShading(self.k, labels)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "labels": [
                {"src": list(e[0]), "dst": list(e[1]), "orient": lab[0], "shade": lab[1]}
                for e, lab in sorted(self.labels.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> GridShading:
        labels = {
            (tuple(r["src"]), tuple(r["dst"])): (r["orient"], r["shade"]) for r in obj["labels"]
        }
        return cls(obj["k"], labels)

    @classmethod
    def uniform(cls, k: int, shade: str = "gray", corner: str | None = "black") -> GridShading:
        """Every edge ``shade``; the upper-right vertical edge ``corner`` (if given)."""
        labels = {e: ("H" if is_horizontal(e) else "V", shade) for e in grid_edges(k)}
        if corner is not None:
            labels[((k, k - 1), (k, k))] = ("V", corner)
        return cls(k, labels)


@dataclass
class ShadingReport:
    results: dict[str, tuple[bool, object]]

    @property
    def proper(self) -> bool:
        return all(ok for ok, _ in self.results.values())

    def passes(self, conditions: Iterable[str] = ALL_CONDITIONS) -> bool:
        return all(self.results[c][0] for c in conditions)

    def failing(self) -> list[str]:
        return [c for c, (ok, _) in self.results.items() if not ok]

    def __str__(self) -> str:
        rows = []
        for c, (ok, witness) in self.results.items():
            rows.append(f"{c}: {'ok' if ok else 'FAIL'}" + ("" if ok else f" at {witness}"))
        return "\n".join(rows)


def check_shading(inst: TilingInstance, s: GridShading, conditions: Iterable[str] = ALL_CONDITIONS) -> ShadingReport:
    """Evaluate each requested condition; failures carry a witness edge or 2-path."""
    conditions = tuple(conditions)
    res: dict[str, tuple[bool, object]] = {}
    edges = grid_edges(s.k)
    if "a1" in conditions:
        bad = [e for e in edges if is_horizontal(e) and s.labels[e][0] != "H"]
        res["a1"] = (not bad, bad[0] if bad else None)
    if "a2" in conditions:
        bad = [e for e in edges if not is_horizontal(e) and s.labels[e][0] != "V"]
        res["a2"] = (not bad, bad[0] if bad else None)
    if "b1" in conditions:
        e = ((0, 0), (1, 0))
        res["b1"] = (s.labels[e][1] == "gray", e)
    if "b2" in conditions:
        e = ((s.k, s.k - 1), (s.k, s.k))
        res["b2"] = (s.labels[e][1] == "black", e)
    if "b3" in conditions:
        witness = None
        for e, f in two_paths(s.k):
            if (tuple(s.labels[e]), tuple(s.labels[f])) in inst.forbidden:
                witness = (e, f)
                break
        res["b3"] = (witness is None, witness)
    unknown = set(conditions) - set(ALL_CONDITIONS)
    if unknown:
        raise ValueError(f"unknown conditions {sorted(unknown)}")
    return ShadingReport(res)


def _domains(inst: TilingInstance, k: int, conditions: tuple[str, ...]) -> list[list[EdgeLabel]]:
    out = []
    for e in grid_edges(k):
        horiz = is_horizontal(e)
        if horiz and "a1" in conditions:
            orients = ("H",)
        elif not horiz and "a2" in conditions:
            orients = ("V",)
        else:
            orients = ("H", "V")
        shades = inst.shades
        if "b1" in conditions and e == ((0, 0), (1, 0)):
            shades = ("gray",)
        if "b2" in conditions and e == ((k, k - 1), (k, k)):
            shades = ("black",)
        out.append([(o, sh) for o in orients for sh in shades])
    return out


def search_shading(
    inst: TilingInstance, k: int, conditions: Iterable[str] = ALL_CONDITIONS
) -> GridShading | None:
    """Backtracking search for a shading of the ``[k]x[k]`` grid meeting ``conditions``.

    Edges are assigned in row-major order; every assignment is checked against the
    already assigned neighbours for forbidden 2-paths.  ``None`` means the search
    space was exhausted.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    conditions = tuple(conditions)
    edges = grid_edges(k)
    doms = _domains(inst, k, conditions)
    into: dict[Point, list[int]] = {}
    outof: dict[Point, list[int]] = {}
    for n, e in enumerate(edges):
        outof.setdefault(e[0], []).append(n)
        into.setdefault(e[1], []).append(n)
    # for each edge, the 2-path partners that come earlier in the order
    earlier_in = [[p for p in into.get(e[0], []) if p < n] for n, e in enumerate(edges)]
    earlier_out = [[q for q in outof.get(e[1], []) if q < n] for n, e in enumerate(edges)]
    use_b3 = "b3" in conditions and bool(inst.forbidden)
    forb = inst.forbidden
    assign: list[EdgeLabel | None] = [None] * len(edges)

    def ok(n: int, lab: EdgeLabel) -> bool:
        if not use_b3:
            return True
        return all((assign[p], lab) not in forb for p in earlier_in[n]) and all(
            (lab, assign[q]) not in forb for q in earlier_out[n]
        )

    def solve(n: int) -> bool:
        if n == len(edges):
            return True
        for lab in doms[n]:
            if ok(n, lab):
                assign[n] = lab
                if solve(n + 1):
                    return True
        assign[n] = None
        return False

    if not solve(0):
        return None
    return GridShading(k, dict(zip(edges, assign)))


def enumerate_shadings_exists(
    inst: TilingInstance, k: int, conditions: Iterable[str] = ALL_CONDITIONS, limit: int = 5_000_000
) -> bool:
    """Independent oracle: test every assignment at once with numpy (small ``k`` only)."""
    conditions = tuple(conditions)
    edges = grid_edges(k)
    # full per-edge domains; only orientation is pinned by a1/a2, everything else is filtered
    doms = []
    for e in edges:
        horiz = is_horizontal(e)
        pinned = ("a1" in conditions) if horiz else ("a2" in conditions)
        orients = (("H",) if horiz else ("V",)) if pinned else ("H", "V")
        doms.append([(o, sh) for o in orients for sh in inst.shades])
    total = int(np.prod([len(d) for d in doms], dtype=np.int64))
    if total > limit:
        raise ValueError(f"{total} assignments exceed the enumeration limit")
    labels = sorted({lab for d in doms for lab in d})
    code = {lab: n for n, lab in enumerate(labels)}
    forb = np.zeros((len(labels), len(labels)), dtype=bool)
    for c, d in inst.forbidden:
        if c in code and d in code:
            forb[code[c], code[d]] = True
    shade_of = np.asarray([lab[1] for lab in labels])
    # mixed-radix decoding of 0..total-1 into one label code per edge
    idx = np.arange(total, dtype=np.int64)
    cols = []
    for d in doms:
        cols.append(np.asarray([code[lab] for lab in d])[idx % len(d)])
        idx //= len(d)
    table = np.stack(cols, axis=1)
    pos = {e: n for n, e in enumerate(edges)}
    alive = np.ones(total, dtype=bool)
    if "b1" in conditions:
        alive &= shade_of[table[:, pos[((0, 0), (1, 0))]]] == "gray"
    if "b2" in conditions:
        alive &= shade_of[table[:, pos[((k, k - 1), (k, k))]]] == "black"
    if "b3" in conditions:
        for e, f in two_paths(k):
            alive &= ~forb[table[:, pos[e]], table[:, pos[f]]]
    return bool(alive.any())


@dataclass
class Classification:
    verdict: str  # "A" or "B-candidate"
    k_max: int
    witness: GridShading | None = None
    refuted_sizes: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.verdict == "A":
            return f"A: proper shading of the {self.witness.k}x{self.witness.k} grid found"
        return f"B-candidate up to k={self.k_max}"


def classify(inst: TilingInstance, k_max: int) -> Classification:
    """Bounded membership test: a proper shading of some ``k <= k_max`` grid, or none.

    ``refuted_sizes`` lists the sizes with no (a1, a2, b1, b3)-shading at all, which is
    the stronger refutation used for the grid-size bound on the crocodile side.
    """
    refuted = []
    for k in range(1, k_max + 1):
        w = search_shading(inst, k, ALL_CONDITIONS)
        if w is not None:
            return Classification("A", k_max, w)
        if search_shading(inst, k, REFUTATION_CONDITIONS) is None:
            refuted.append(k)
    return Classification("B-candidate", k_max, None, tuple(refuted))
