"""
When no shading exists, the Crocodile wins
==========================================

Forbid every pair of consecutive edge labels.  No grid has a proper shading,
and every fugitive we try ends up writing a red Q0 path from a to b.
"""
from __future__ import annotations

from collections import Counter

from frpq_escape import (
    Canonical,
    CrocodileStrategy,
    GameConfig,
    RandomPolicy,
    TilingInstance,
    classify,
    monitor_principles,
    play,
    reduce,
    s_k,
    s_layer,
)

inst = TilingInstance.all_pairs(("gray", "black"))
print(classify(inst, 3))

cfg = GameConfig(reduce(inst))
croc = CrocodileStrategy(s_k(2) + s_layer(2), name="S_2+S_layer(2)")

# %%
# The canonical fugitive keeps every edge at the right temperature and still
# loses: the first grid square contains a forbidden pair, and the move that
# closes it writes a red bad-language path from a to b.  The monitor flags
# exactly that step.
t = play(cfg, Canonical(), croc)
print("canonical:", t.outcome)
print("last move:", t.steps[-1].constraint_name, "at", (t.steps[-1].u, t.steps[-1].v))
print("violations:", monitor_principles(t, cfg).violations)

# %%
# Random rule-abiding fugitives pick other shades and other tie-breaks, but
# every choice of shades is forbidden somewhere, so they all lose.
steps = Counter(play(cfg, RandomPolicy(seed), croc).outcome.step for seed in range(20))
print("losing steps over 20 seeds:", dict(sorted(steps.items())))
