from __future__ import annotations

import pytest

from frpq_escape.errors import LemmaShapeMismatch
from frpq_escape.fixtures import build_G, build_G_dollar
from frpq_escape.game import GameConfig, monitor_principles
from frpq_escape.pipeline import name_by_coordinates, run_stage_pipeline
from frpq_escape.structure import same_named


@pytest.mark.parametrize("m, exit_at", [(1, None), (1, 1), (2, None), (2, 1), (2, 2)])
def test_pipeline_checkpoints(m, exit_at):
    run = run_stage_pipeline(None, m, exit_at)
    assert run.ok
    labels = [c.label for c in run.checkpoints]
    assert labels == ["stage I", "stage II", *[f"layer {j}" for j in range(1, m + 2)], "final"]
    want = build_G_dollar(exit_at) if exit_at else build_G(m + 1)
    assert same_named(run.structure.erase_shades(), want)
    assert run.expected_final == (f"G_{exit_at}^$" if exit_at else f"G_{m + 1}")
    assert monitor_principles(run.transcript, run.config).clean


@pytest.mark.parametrize("order, seed", [("random", 3), ("random-step", 9)])
def test_pipeline_is_order_independent(order, seed):
    base = run_stage_pipeline(None, 2, 1)
    other = run_stage_pipeline(None, 2, 1, order=order, seed=seed)
    assert same_named(base.structure.erase_shades(), other.structure.erase_shades())


def test_pipeline_argument_checks():
    with pytest.raises(ValueError):
        run_stage_pipeline(None, 0)
    with pytest.raises(ValueError):
        run_stage_pipeline(None, 2, 3)


def test_pipeline_raises_when_play_is_lost(full_instance):
    """With every pair forbidden the fugitive cannot build a grid, and the checks say so."""
    with pytest.raises(LemmaShapeMismatch) as info:
        run_stage_pipeline(full_instance, 1)
    assert "outcome" in info.value.report
    run = run_stage_pipeline(full_instance, 1, check=False)
    assert run.transcript.lost and not run.ok


def test_naming_is_stable(red):
    run = run_stage_pipeline(None, 1, 1, config=GameConfig(red))
    again = name_by_coordinates(run.transcript.final, run.transcript.initial_path)
    assert same_named(again, run.structure)
