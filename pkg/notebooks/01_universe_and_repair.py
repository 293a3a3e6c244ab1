# %% [markdown]
# # Asset universes, portfolios and the repair operator
#
# A universe holds mean returns and a covariance matrix. A portfolio is a
# weight vector on the unit simplex; its objectives are expected return
# (maximize) and variance (minimize).

# %%
import numpy as np

from levymoead.datasets import AssetUniverse, format_universe, parse_universe, synthetic_universe
from levymoead.problem import DegenerateWeightsError, evaluate, repair, repair_or_uniform

# two assets in the OR-library text layout: n, then (mean, std) rows, then
# upper-triangle correlations as "i j rho"
text = "2\n0.1 0.2\n0.05 0.1\n1 1 1.0\n1 2 0.5\n2 2 1.0\n"
u2 = parse_universe(text, name="toy")
print(u2.covariance)

# %%
# the 50/50 portfolio
w = np.array([0.5, 0.5])
print(evaluate(w, u2))

# %%
# files round-trip exactly
assert format_universe(parse_universe(format_universe(u2))) == format_universe(u2)

# %% [markdown]
# Variation operators leave the simplex. Repair clips negatives and rescales.

# %%
print(repair(np.array([0.4, -0.2, 0.8])))
try:
    repair(np.array([-1.0, -2.0]))
except DegenerateWeightsError as exc:
    print("degenerate:", exc)
print(repair_or_uniform(np.array([-1.0, -2.0])))

# %%
# a 31-asset factor-model universe stands in for the OR-library files
u = synthetic_universe(31, seed=7)
rng = np.random.default_rng(0)
x = repair(rng.uniform(-1, 2, u.n))
print(u.n, x.sum(), evaluate(x, u))
