# %% [markdown]
# # NBI-style Tchebycheff decomposition
#
# The two extreme points F1 (best return) and F2 (least risk) span a segment.
# N reference points are spread evenly along it and every subproblem
# minimizes the weighted deviation from its own reference point, with a
# shared normal vector as weights. Objectives are handled as (-return, risk).

# %%
import numpy as np

from levymoead.decomposition import ScalarizationContext, make_reference_points, to_min

F1 = np.array([-0.010, 0.0040])  # high return, high risk
F2 = np.array([-0.002, 0.0005])  # low return, low risk
refs = make_reference_points(F1, F2, 5)
print(refs)

# %%
# the context tracks the extremes and the neighborhoods
pts = to_min(np.array([[0.010, 0.0040], [0.002, 0.0005], [0.006, 0.0015]]))
ctx = ScalarizationContext(N=5, T=2, initial=pts)
print("normal", ctx.normal)
print("neighbors", ctx.neighbors.tolist())

# %%
# scalar values of one candidate on every subproblem
f = to_min(np.array([[0.006, 0.0015]]))
print(ctx.nbi(np.repeat(f, 5, axis=0), np.arange(5)))

# %%
# a better extreme moves the segment
moved = ctx.update_extremes(np.array([-0.012, 0.0050]))
print(moved, ctx.F1)
