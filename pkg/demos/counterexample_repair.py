"""
Assembling a counterexample from a shading
==========================================

A proper shading of a square grid should turn into a structure whose green
and red halves agree on every view but disagree on Q0.  The bare shaded
dollar grid falls short by a handful of requests; one extra green edge per
request closes them.
"""
from __future__ import annotations

from frpq_escape import (
    TilingInstance,
    assemble_counterexample,
    build_G_dollar,
    cold_alpha_mirror,
    reduce,
    requests,
    search_shading,
    validate_counterexample,
)
from frpq_escape.fixtures import repair_edges

inst = TilingInstance(("gray", "black"))
red = reduce(inst)

# %%
# Find a proper shading of the 2 x 2 grid and copy it onto the dollar grid.
s = search_shading(inst, 2)
bare = build_G_dollar(2, s)
print("bare grid:", validate_counterexample(bare, red.constraints(), red.q0))
for r in requests(red.constraints(), bare):
    print("  pending", r.constraint.name, bare.name(r.u), "->", bare.name(r.v))

# %%
# The pending requests all ask for a green word of language 15 back to b'.
# A single green y^W edge answers each one without creating anything new.
fix = repair_edges(bare, red)
print(len(fix), "repair edges")
g = assemble_counterexample(inst, s)
print("repaired grid:", validate_counterexample(g, red.constraints(), red.q0))

# %%
# A much smaller structure also passes the validator, for any instance at all.
# Its red half copies the green start path but writes x^W, which no view
# language can tell apart from x^C here.
full = reduce(TilingInstance.all_pairs(("gray", "black")))
mirror = cold_alpha_mirror()
print("mirror vs all-pairs instance:", validate_counterexample(mirror, full.constraints(), full.q0))
