"""
Watching the canonical fugitive build a grid
============================================

The Crocodile plays the staged strategy and the canonical fugitive answers
every request with its shortest safe word.  We print the shape at each stage
boundary and compare it with the fixture builders.
"""
from __future__ import annotations

from frpq_escape import run_stage_pipeline

# %%
# With no exit, two cycles give a staircase with three diagonal steps, and the
# layer phases fill it in to the 3 x 3 grid.
run = run_stage_pipeline(None, m=2)
for c in run.checkpoints:
    print(f"{c.label:10s} -> {c.expected:10s} iso={c.isomorphic} named={c.named_equal}")
print("final:", run.structure.summary())

# %%
# Taking the dollar exit at cycle 1 stops the staircase early and closes the
# grid at side 1 instead.
run = run_stage_pipeline(None, m=2, exits=1)
print(run.expected_final, "reached:", run.ok)

# %%
# The request order does not matter for the shapes.
for order in ("chase", "random", "random-step"):
    r = run_stage_pipeline(None, m=2, exits=2, order=order, seed=5)
    print(order, r.transcript.outcome, len(r.structure.vertices), "vertices")

# %%
# The final structure can be drawn with graphviz.
print(run.structure.to_dot(erase_shades=True)[:300], "...")
