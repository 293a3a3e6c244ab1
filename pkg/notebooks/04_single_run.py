# %% [markdown]
# # One MOEA/D-Levy run against a known frontier
#
# The efficient frontier of a synthetic universe is solved by quadratic
# programming (needs the optional cvxopt dependency), then one seeded run
# is traced by IGD per generation.

# %%
from dataclasses import replace

import numpy as np

from levymoead.algorithms import AlgorithmConfig, run
from levymoead.datasets import efficient_frontier, synthetic_universe

u = synthetic_universe(31, seed=7)
frontier = efficient_frontier(u, 120)
print(len(frontier), frontier.extremes)

# %%
cfg = AlgorithmConfig(pipeline="levy", N=100, T=20, max_gen=100)
rec = run(u, frontier, cfg, seed=0)
print("generations", rec.generations, "stopped early", rec.stopped_early)
print("IGD at 0, 10, 50, final:", [f"{rec.igd_trace[g]:.2e}" for g in (0, 10, 50, -1)])
print({k: f"{v:.3e}" for k, v in rec.metrics.items()})

# %%
# the other pipelines share the framework
for p in ("dem", "de", "ga", "nsga2"):
    r = run(u, frontier, replace(cfg, pipeline=p), seed=0)
    print(p, f"{r.metrics['IGD']:.2e}")

# %%
# step lengths and update success of each offspring are logged
steps = rec.steps
print("successful trials with step > 0.2:", int(np.sum((steps[:, 1] > 0.2) & (steps[:, 2] > 0))))
