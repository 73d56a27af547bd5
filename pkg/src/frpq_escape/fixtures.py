"""Builders for the canonical structures: staircase paths, grids and partial grids.

Every fixture uses the same ids and names: ``a=0``, ``b=1``, ``a'=2``, ``b'=3`` and
grid vertices ``v(i,j)`` from id 4 on, numbered by ``(i, j)`` in lexicographic order
within the full ``[m] x [m]`` square.  The staircase path visits
``v(0,0), v(1,0), v(1,1), v(2,1), ...`` so ``v_{2i} = v(i,i)`` and
``v_{2i+1} = v(i+1,i)``; with these names the staircase, the partial grids and the
full grid are literally nested subgraphs of one another.

Without a shading, grid labels carry no shade (the shade-blind view).  With a
shading, each grid edge gets that shade in both of its colors.
"""
from __future__ import annotations

from typing import Callable

from .structure import Structure
from .symbols import OMEGA, Label, alpha, dollar, grid, x, y

A, B, A_PRIME, B_PRIME = 0, 1, 2, 3
FIRST_GRID_ID = 4

ShadeFn = Callable[[int, int, str], str]


def vname(i: int, j: int) -> str:
    return f"v({i},{j})"


def grid_id(i: int, j: int, m: int) -> int:
    return FIRST_GRID_ID + i * (m + 1) + j


def staircase(m: int) -> list[tuple[int, int]]:
    """Coordinates of ``v_0 .. v_{2m}``."""
    out = [(0, 0)]
    for i in range(m):
        out += [(i + 1, i), (i + 1, i + 1)]
    return out


def letter_of(i: int, j: int) -> str:
    return "A" if (i + j) % 2 == 0 else "B"


def _shade(shading: ShadeFn | None, i: int, j: int, orient: str) -> str | None:
    return None if shading is None else shading(i, j, orient)


def _assemble(m: int, cells: list[tuple[int, int]], shading: ShadeFn | None, grid_edges_fn, with_dollar: bool) -> Structure:
    ids = {c: grid_id(*c, m) for c in cells}
    edges: list[tuple[int, int, Label]] = [
        (A, A_PRIME, Label(alpha("C"), "G")),
        (A, A_PRIME, Label(alpha("W"), "R")),
        (B_PRIME, B, Label(OMEGA, "G")),
        (B_PRIME, B, Label(OMEGA, "R")),
    ]
    for c, v in ids.items():
        edges += [
            (A_PRIME, v, Label(x("C"), "G")),
            (A_PRIME, v, Label(x("W"), "R")),
            (v, B_PRIME, Label(y("C"), "G")),
            (v, B_PRIME, Label(y("W"), "R")),
        ]
    for (i, j), (i2, j2) in grid_edges_fn(ids):
        orient = "H" if j2 == j else "V"
        shade = _shade(shading, i, j, orient)
        letter = letter_of(i, j)
        u, v = ids[(i, j)], ids[(i2, j2)]
        edges += [
            (u, v, Label(grid(letter, orient, "C", shade), "G")),
            (u, v, Label(grid(letter, orient, "W", shade), "R")),
        ]
    if with_dollar:
        top = ids[(m, m)]
        edges += [(top, B_PRIME, Label(dollar("C"), "G")), (top, B_PRIME, Label(dollar("W"), "R"))]
    names = {A: "a", B: "b", A_PRIME: "a'", B_PRIME: "b'"}
    names.update({v: vname(*c) for c, v in ids.items()})
    vertices = [A, B, A_PRIME, B_PRIME, *ids.values()]
    return Structure.build(vertices, edges, A, B, names, next_id=grid_id(m, m, m) + 1)


def _check_m(m: int) -> None:
    if m < 1:
        raise ValueError("m must be >= 1")


def build_P(m: int, shading: ShadeFn | None = None, dollar_edges: bool = False) -> Structure:
    _check_m(m)
    cells = staircase(m)

    def steps(ids):
        return list(zip(cells, cells[1:]))

    return _assemble(m, cells, shading, steps, dollar_edges)


def build_P_dollar(m: int, shading: ShadeFn | None = None) -> Structure:
    return build_P(m, shading, dollar_edges=True)


def build_L(m: int, k: int, shading: ShadeFn | None = None, dollar_edges: bool = False) -> Structure:
    """Subgraph of the grid induced by ``|i - j| <= k`` (plus a, a', b', b)."""
    _check_m(m)
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    cells = [(i, j) for i in range(m + 1) for j in range(m + 1) if abs(i - j) <= k]

    def steps(ids):
        out = []
        for (i, j) in ids:
            for nxt in ((i + 1, j), (i, j + 1)):
                if nxt in ids:
                    out.append(((i, j), nxt))
        return out

    return _assemble(m, cells, shading, steps, dollar_edges)


def build_L_dollar(m: int, k: int, shading: ShadeFn | None = None) -> Structure:
    return build_L(m, k, shading, dollar_edges=True)


def build_G(m: int, shading: ShadeFn | None = None, dollar_edges: bool = False) -> Structure:
    """The full ``[m] x [m]`` grid, written straight from its definition."""
    _check_m(m)
    cells = [(i, j) for i in range(m + 1) for j in range(m + 1)]

    def steps(ids):
        horiz = [((i, j), (i + 1, j)) for i in range(m) for j in range(m + 1)]
        vert = [((i, j), (i, j + 1)) for i in range(m + 1) for j in range(m)]
        return horiz + vert

    return _assemble(m, cells, shading, steps, dollar_edges)


def build_G_dollar(m: int, shading: ShadeFn | None = None) -> Structure:
    return build_G(m, shading, dollar_edges=True)


def cold_alpha_mirror(shade: str = "gray") -> Structure:
    """A 7-vertex structure whose red half copies the green Q_start path with ``alpha^C``.

    The red copy swaps ``x^C`` for ``x^W`` and keeps every other symbol cold.  It
    satisfies every view constraint of the reduction for any tiling instance, while
    no red Q_0 word joins a and b; see the test suite for the mechanical check.
    """
    v0, v1, v2 = 4, 5, 6
    green_path = [
        (A, A_PRIME, alpha("C")),
        (A_PRIME, v0, x("C")),
        (v0, v1, grid("A", "H", "C", shade)),
        (v1, v2, grid("B", "V", "C", shade)),
        (v2, B_PRIME, y("C")),
        (B_PRIME, B, OMEGA),
    ]
    edges = [(u, v, Label(s, "G")) for u, v, s in green_path]
    edges += [(A_PRIME, v, Label(x("C"), "G")) for v in (v1, v2)]
    edges += [(u, v, Label(x("W") if s.kind == "x" else s, "R")) for u, v, s in green_path]
    edges += [(A_PRIME, v, Label(x("W"), "R")) for v in (v1, v2)]
    names = {A: "a", B: "b", A_PRIME: "a'", B_PRIME: "b'", v0: "v0", v1: "v1", v2: "v2"}
    return Structure.build([A, B, A_PRIME, B_PRIME, v0, v1, v2], edges, A, B, names)


def repair_edges(g: Structure, reduction) -> list[tuple[int, int, Label]]:
    """Green ``y^W`` edges closing the pending ``Q_good^15`` red-to-green requests of ``g``.

    In a shaded ``G_m^$`` the red ``y^W`` edge of a grid vertex with no cold green
    ``A_H B_V`` or ``B_V`` route to ``b'`` (most of the top row and one vertex of the
    right column) asks for a green word of language 15 to ``b'``.  The one-letter
    answer ``y^W`` creates no new request and no green Q0 word from a to b.
    """
    from .chase import requests

    back15 = reduction.constraints_of("good", 15)[1]
    return [(r.u, r.v, Label(y("W"), "G")) for r in requests([back15], g)]


def assemble_counterexample(inst, s, repair: bool = True) -> Structure:
    """The shaded grid ``G_k^$`` for a proper shading ``s`` of the ``[k] x [k]`` grid.

    With ``repair`` (the default) the edges from :func:`repair_edges` are added; the
    bare shaded grid leaves those requests open and is rejected.  Raises
    ``InvalidInstanceError`` for an improper shading and ``ValueError`` if the
    result does not validate.
    """
    from .chase import validate_counterexample
    from .errors import InvalidInstanceError
    from .reduction import reduce
    from .tiling import check_shading

    report = check_shading(inst, s)
    if not report.proper:
        raise InvalidInstanceError(f"shading is not proper:\n{report}")
    red = reduce(inst)
    g = build_G_dollar(s.k, s)
    if repair:
        g = g.with_edges(repair_edges(g, red))
    verdict = validate_counterexample(g, red.constraints(), red.q0)
    if not verdict.valid:
        raise ValueError(f"assembled structure is not a counterexample: {verdict}")
    return g
