from __future__ import annotations

import pytest

from frpq_escape.fixtures import assemble_counterexample, build_G_dollar, cold_alpha_mirror
from frpq_escape.game import FAULT, LOST, CrocodileStrategy, GameConfig, initial_position, play
from frpq_escape.homomorphism import is_homomorphism
from frpq_escape.language import color, from_patterns
from frpq_escape.policies import (
    Canonical,
    ExitScript,
    Lifting,
    RandomPolicy,
    ShadingOracle,
    grid_coordinates,
    has_dollar,
    reshade,
    shape_representatives,
)
from frpq_escape.reduction import S_START
from frpq_escape.symbols import Label, Pattern, dollar, grid, x
from frpq_escape.tiling import GridShading


def test_shading_oracle_defaults():
    o = ShadingOracle()
    assert o(0, 0, "H") == "gray"
    assert o(1, 0, "V") == "black"  # entering the diagonal
    assert o(1, 1, "V") == "gray"
    s = GridShading.uniform(1, shade="black", corner="black")
    o = ShadingOracle(s)
    assert o(0, 0, "H") == "black"
    assert o(5, 5, "H") == "gray"  # outside the shading


def test_exit_script():
    assert ExitScript.parse("k=2") == ExitScript(2)
    assert ExitScript.parse(None) == ExitScript(None)
    assert ExitScript(2)((2, 2)) and not ExitScript(2)((1, 1))
    assert not ExitScript(None)((1, 1))


def test_reshade_uses_coordinates():
    w = (Label(grid("A", "H", "C", "black"), "G"), Label(grid("B", "V", "C", "black"), "G"))
    out = reshade(w, (0, 0), None, ShadingOracle())
    assert [l.symbol.shade for l in out] == ["gray", "black"]
    # the end point fixes coordinates backwards: edges leave (0,2) and (1,2)
    back = reshade(w, None, (1, 3), ShadingOracle())
    assert [l.symbol.shade for l in back] == ["gray", "gray"]
    assert [l.symbol.shade for l in reshade(w, None, (2, 2), ShadingOracle())] == ["gray", "black"]


def test_shape_representatives_one_per_shape():
    head = color(from_patterns([Pattern("x", "C"), Pattern("grid", "C", "A", "H"), Pattern("grid", "C", "B", "V")]), "G")
    reps = shape_representatives(head, 100)
    assert len(reps) == 1 and head.accepts(reps[0])
    assert has_dollar((Label(dollar("C"), "G"),)) and not has_dollar((Label(x("C"), "G"),))


def test_grid_coordinates_of_initial_path(config):
    d = initial_position(Canonical(), config)
    coords = grid_coordinates(d, 3)
    assert sorted(coords.values()) == [(0, 0), (1, 0), (1, 1)]


def test_audit_of_stage_one(config):
    """Depth-2 lookahead over every pending request: grid alternatives all lose."""
    c = Canonical(audit_depth=2)
    t = play(config, c, CrocodileStrategy(S_START))
    assert t.outcome.kind != LOST
    assert len(c.audit) == 23
    survivors = [(e.request.split()[0], e.alternative) for e in c.discrepancies()]
    assert survivors == [
        ("good2->", "R:alpha^C"),
        ("good15->", "R:$^C"),
        ("good15->", "R:$^C"),
        ("good14->", "R:x^C"),
        ("good14->", "R:x^C"),
        ("good3<-", "G:x^W"),
        ("good4->", "R:y^C"),
        ("good4<-", "G:y^W"),
        ("good4<-", "G:y^W"),
        ("good12->", "R:x^C"),
        ("good3<-", "G:x^W"),
    ]
    for e in c.audit:
        if e.verdict == "survives":
            assert "A_" not in e.alternative and "B_" not in e.alternative


@pytest.mark.parametrize("order, seed", [("random", 0), ("random-step", 1), ("chase", 0)])
def test_lifting_into_counterexample_is_certified(config, empty_instance, witness_k1, order, seed):
    g = assemble_counterexample(empty_instance, witness_k1)
    lift = Lifting(g)
    t = play(config, lift, CrocodileStrategy.free(order, seed))
    assert t.outcome.kind != LOST
    assert lift.certified and len(lift.certificates) == len(t.steps) + 1
    assert is_homomorphism(lift.h, t.final, g)


def test_lifting_into_mirror(config):
    m = cold_alpha_mirror()
    lift = Lifting(m)
    t = play(config, lift, CrocodileStrategy.free("random", 7))
    assert t.outcome.kind != LOST and lift.certified


def test_lifting_into_bare_dollar_grid_faults(config, witness_k1):
    lift = Lifting(build_G_dollar(1, witness_k1))
    t = play(config, lift, CrocodileStrategy.free("chase", 0))
    assert t.outcome.kind == FAULT and "good15<-" in t.outcome.detail


def test_random_policy_is_seeded(config):
    from frpq_escape.reduction import s_k, s_layer

    croc = CrocodileStrategy(s_k(2) + s_layer(2))
    runs = [play(config, RandomPolicy(s), croc).to_tsv() for s in (4, 4, 5)]
    assert runs[0] == runs[1]


def test_canonical_never_beaten_on_empty_instance(config):
    c = Canonical()
    play(config, c, CrocodileStrategy(S_START))
    assert c.beaten == 0
