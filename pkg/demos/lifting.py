"""
Lifting play into a fixed counterexample
========================================

If a structure satisfies every view constraint and has no red Q0 path from a
to b, the fugitive can copy each answer out of it.  A homomorphism from the
play into the target is maintained and checked after every step.
"""
from __future__ import annotations

from frpq_escape import (
    CrocodileStrategy,
    GameConfig,
    Lifting,
    TilingInstance,
    assemble_counterexample,
    build_G_dollar,
    play,
    reduce,
    search_shading,
)

inst = TilingInstance(("gray", "black"))
cfg = GameConfig(reduce(inst))
s = search_shading(inst, 1)
target = assemble_counterexample(inst, s)

# %%
# Free play: the Crocodile may pick any pending request, in random order.
for seed in range(5):
    lift = Lifting(target)
    t = play(cfg, lift, CrocodileStrategy.free("random-step", seed))
    print(f"seed {seed}: {t.outcome}, certified={lift.certified}, {len(lift.certificates)} checks")

# %%
# Against the bare dollar grid the copy runs out: one request has no answer
# inside the target, and the engine reports a policy fault.
t = play(cfg, Lifting(build_G_dollar(1, s)), CrocodileStrategy.free("chase"))
print("bare target:", t.outcome)
