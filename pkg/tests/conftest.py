from __future__ import annotations

import random

import pytest

from frpq_escape.game import GameConfig
from frpq_escape.language import enumerate_words
from frpq_escape.reduction import reduce
from frpq_escape.structure import Structure
from frpq_escape.symbols import COLORS, Label, alphabet
from frpq_escape.tiling import TilingInstance, search_shading

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def empty_instance() -> TilingInstance:
    return TilingInstance(("gray", "black"), frozenset())


@pytest.fixture(scope="session")
def full_instance() -> TilingInstance:
    return TilingInstance.all_pairs(("gray", "black"))


@pytest.fixture(scope="session")
def red(empty_instance):
    return reduce(empty_instance)


@pytest.fixture(scope="session")
def red_full(full_instance):
    return reduce(full_instance)


@pytest.fixture
def config(red) -> GameConfig:
    return GameConfig(red)


@pytest.fixture(scope="session")
def witness_k1(empty_instance):
    return search_shading(empty_instance, 1)


def random_structure(rng: random.Random, shades=("black", "gray"), n: int = 8, edges: int = 14, plant=()) -> Structure:
    """Random labeled graph on ``n`` vertices; words in ``plant`` are laid along random walks."""
    labels = [Label(s, c) for s in alphabet(shades) for c in COLORS]
    es = set()
    for _ in range(edges):
        es.add((rng.randrange(n), rng.randrange(n), rng.choice(labels)))
    for word in plant:
        v = rng.randrange(n)
        for lab in word:
            w = rng.randrange(n)
            es.add((v, w, lab))
            v = w
    return Structure.build(range(n), es, 0, 1)


def sample_words(lang, rng: random.Random, k: int = 2, budget: int = 200) -> list[tuple]:
    words, _ = enumerate_words(lang, budget)
    return [rng.choice(words) for _ in range(k)] if words else []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def grid_mutations(g: Structure):
    """Single-edge mutations of grid edges: delete, swap ink, flip temperature."""
    from dataclasses import replace

    for e in sorted(g.edges, key=lambda e: (e.src, e.dst, e.label.sort_key())):
        if not e.label.symbol.is_grid:
            continue
        lab = e.label
        other_ink = Label(lab.symbol, "R" if lab.color == "G" else "G")
        flipped = Label(replace(lab.symbol, temp="W" if lab.symbol.cold else "C"), lab.color)
        yield f"delete {e}", g.without_edges([e])
        yield f"recolor {e}", g.without_edges([e]).with_edges([(e.src, e.dst, other_ink)])
        yield f"temperature {e}", g.without_edges([e]).with_edges([(e.src, e.dst, flipped)])
