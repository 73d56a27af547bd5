from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frpq_escape.chase import (
    GREEN_TO_RED,
    RED_TO_GREEN,
    RegularConstraint,
    add,
    add_path,
    both_directions,
    is_pending,
    requests,
    satisfies,
    validate_counterexample,
)
from frpq_escape.errors import NotInLanguageError, StaleRequestError
from frpq_escape.language import color, enumerate_words, evaluate_brute, from_pattern
from frpq_escape.structure import Structure
from frpq_escape.symbols import OMEGA, Label, Pattern, alpha, x

from conftest import random_structure


def brute_requests(constraints, d):
    out = set()
    for t in constraints:
        pending = evaluate_brute(t.body, d) - evaluate_brute(t.head, d)
        out |= {(t.name, u, v) for u, v in pending}
    return out


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_requests_match_brute_force(red, seed):
    rng = random.Random(seed)
    cons = [red.constraints_of("good", i)[rng.randrange(2)] for i in rng.sample(range(1, 16), 4)]
    plant = []
    for t in cons:
        words, _ = enumerate_words(t.body, 20)
        plant.append(rng.choice(words))
    d = random_structure(rng, plant=plant)
    got = {(r.constraint.name, r.u, r.v) for r in requests(cons, d)}
    assert got == brute_requests(cons, d)


def test_requests_sorted_and_restricted(red):
    rng = random.Random(2)
    cons = red.constraints(("good",))
    d = random_structure(rng, edges=30)
    rs = requests(cons, d)
    assert [r.key() for r in rs] == sorted(r.key() for r in rs)
    at_a = requests(cons, d, sources=[d.a])
    assert set(at_a) == {r for r in rs if r.u == d.a}


def test_constraint_needs_base_language():
    base = from_pattern(Pattern("x", "C"))
    with pytest.raises(ValueError):
        RegularConstraint(color(base, "G"), GREEN_TO_RED)
    with pytest.raises(ValueError):
        RegularConstraint(base, "<->")
    fwd, back = both_directions(base, "t", 1)
    assert (fwd.direction, back.direction) == (GREEN_TO_RED, RED_TO_GREEN)


def test_add_serves_request_and_checks_word(red):
    fwd = red.constraints_of("good", 2)[0]
    d = Structure.initial().add_path(0, 1, (Label(alpha("C"), "G"),))[0]
    (r,) = requests([fwd], d)
    assert is_pending(d, r)
    with pytest.raises(NotInLanguageError):
        add(d, r, (Label(alpha("C"), "G"),))
    d2, fresh = add_path(d, r, (Label(alpha("W"), "R"),))
    assert fresh == () and not is_pending(d2, r) and satisfies(d2, [fwd])
    with pytest.raises(StaleRequestError):
        add(d2, r, (Label(alpha("C"), "R"),))


def test_add_rejects_request_without_body(red):
    fwd = red.constraints_of("good", 2)[0]
    d = Structure.initial().add_path(0, 1, (Label(alpha("C"), "G"),))[0]
    (r,) = requests([fwd], d)
    other = Structure.initial()
    with pytest.raises(StaleRequestError):
        add(other, r, (Label(alpha("W"), "R"),))


def test_validator_clauses(red):
    cons = red.constraints()
    empty = Structure.initial()
    v = validate_counterexample(empty, cons, red.q0)
    assert not v and v.clause == "green"
    w, _ = enumerate_words(red.green_start, 1)
    d = Structure.initial().add_path(0, 1, w[0])[0]
    v = validate_counterexample(d, cons, red.q0)
    assert not v and v.clause == "constraints"
    assert v.to_json()["witness"]["u"] == v.witness.u
    both = d.add_path(0, 1, tuple(Label(l.symbol, "R") for l in w[0]))[0]
    only_q0 = [red.q0]
    v = validate_counterexample(both, [], red.q0)
    assert not v and v.clause == "red"
    assert validate_counterexample(d, [], red.q0)
    assert not validate_counterexample(d, only_q0, red.q0)
