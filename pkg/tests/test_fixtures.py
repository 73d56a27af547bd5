from __future__ import annotations

import random

import pytest

from frpq_escape.chase import requests, validate_counterexample
from frpq_escape.errors import InvalidInstanceError
from frpq_escape.fixtures import (
    assemble_counterexample,
    build_G,
    build_G_dollar,
    build_L,
    build_P,
    build_P_dollar,
    cold_alpha_mirror,
    grid_id,
    repair_edges,
    staircase,
    vname,
)
from frpq_escape.reduction import reduce
from frpq_escape.structure import named_edges, same_named
from frpq_escape.tiling import GridShading, search_shading

from conftest import grid_mutations
from test_tiling import random_instance


def test_sizes():
    for m in (1, 2, 3):
        p, g = build_P(m), build_G(m)
        assert len(p.vertices) == 4 + 2 * m + 1
        assert len(g.vertices) == 4 + (m + 1) ** 2
        grid_edges = 2 * m * (m + 1)
        # two inks per grid edge, plus x and y edges per vertex, plus alpha and omega
        assert len(g.edges) == 2 * grid_edges + 4 * (m + 1) ** 2 + 4
        assert len(build_G_dollar(m).edges) == len(g.edges) + 2


def test_staircase_coordinates():
    assert staircase(2) == [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]
    assert grid_id(0, 0, 3) == 4 and grid_id(1, 2, 3) == 10
    assert vname(2, 1) == "v(2,1)"


@pytest.mark.parametrize("m", [1, 2, 3])
def test_nesting_by_name(m):
    assert same_named(build_L(m, m), build_G(m))
    assert named_edges(build_P(m)) <= named_edges(build_L(m, 1))
    for k in range(m):
        assert named_edges(build_L(m, k)) <= named_edges(build_L(m, k + 1))
    assert named_edges(build_L(m, 0)) < named_edges(build_P(m))


@pytest.mark.parametrize("m", [1, 2])
def test_dollar_adds_two_edges_at_top(m):
    extra = named_edges(build_P_dollar(m)) - named_edges(build_P(m))
    assert {(u, v) for u, v, _ in extra} == {(vname(m, m), "b'")}
    assert {lab.color for _, _, lab in extra} == {"G", "R"}


def test_bad_parameters():
    with pytest.raises(ValueError):
        build_P(0)
    with pytest.raises(ValueError):
        build_L(2, 3)


def test_shading_is_copied_to_both_inks(witness_k1):
    g = build_G(1, witness_k1)
    for e in g.edges:
        if e.label.symbol.is_grid:
            assert e.label.symbol.shade in ("gray", "black")
    assert same_named(g.erase_shades(), build_G(1))


@pytest.mark.parametrize(
    "m, failing",
    [
        (1, {"v(0,1)"}),
        (2, {"v(0,2)", "v(1,2)", "v(2,0)"}),
        (3, {"v(0,3)", "v(1,3)", "v(2,3)", "v(3,1)"}),
    ],
)
def test_bare_dollar_grid_leaves_language15_requests(red, m, failing):
    g = build_G_dollar(m, GridShading.uniform(m))
    rs = requests(red.constraints(("good", "ugly")), g)
    assert {r.constraint.name for r in rs} == {"good15<-"}
    assert {(g.name(r.u), g.name(r.v)) for r in rs} == {(n, "b'") for n in failing}
    assert not validate_counterexample(g, red.constraints(), red.q0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_repair_gives_counterexample(red, m):
    g = build_G_dollar(m, GridShading.uniform(m))
    fixed = g.with_edges(repair_edges(g, red))
    assert validate_counterexample(fixed, red.constraints(), red.q0)


def test_assemble_counterexample(empty_instance, witness_k1):
    g = assemble_counterexample(empty_instance, witness_k1)
    red = reduce(empty_instance)
    assert validate_counterexample(g, red.constraints(), red.q0)
    with pytest.raises(ValueError):
        assemble_counterexample(empty_instance, witness_k1, repair=False)
    improper = GridShading.uniform(1, corner=None)
    with pytest.raises(InvalidInstanceError):
        assemble_counterexample(empty_instance, improper)


def test_assemble_on_random_positive_instances():
    rng = random.Random(11)
    done = 0
    while done < 10:
        inst = random_instance(rng)
        for k in (1, 2):
            s = search_shading(inst, k)
            if s is not None:
                assemble_counterexample(inst, s)
                done += 1
                break


def test_grid_mutations_all_invalidate(red, empty_instance, witness_k1):
    g = assemble_counterexample(empty_instance, witness_k1)
    muts = list(grid_mutations(g))
    assert len(muts) == 24
    for desc, h in muts:
        assert not validate_counterexample(h, red.constraints(), red.q0), desc


def test_shade_mutations_can_keep_validity(red, empty_instance, witness_k1):
    """Shade changes are outside the mutation family: most of them stay valid."""
    from dataclasses import replace

    from frpq_escape.symbols import Label

    g = assemble_counterexample(empty_instance, witness_k1)
    verdicts = []
    for e in g.edges:
        sym = e.label.symbol
        if sym.is_grid:
            other = replace(sym, shade="black" if sym.shade == "gray" else "gray")
            h = g.without_edges([e]).with_edges([(e.src, e.dst, Label(other, e.label.color))])
            verdicts.append(bool(validate_counterexample(h, red.constraints(), red.q0)))
    assert (sum(verdicts), len(verdicts)) == (6, 8)


def test_cold_alpha_mirror_is_valid_for_any_instance(red, red_full):
    d = cold_alpha_mirror()
    assert len(d.vertices) == 7
    for r in (red, red_full):
        assert validate_counterexample(d, r.constraints(), r.q0)
