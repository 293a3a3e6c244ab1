# %% [markdown]
# # Quality indicators and significance testing

# %%
import numpy as np

from levymoead.metrics import all_metrics, hypervolume, nondominated_filter
from levymoead.stats import MetricSample, grid_to_csv, mark_winners, summarize, wilcoxon_rank_sum

front = np.array([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]])
reference = np.array([[0.0, 0.0], [3.0, 0.0]])
print(all_metrics(front, reference))

# %%
# hypervolume counts the area between each point and the dominated corner
print(hypervolume([[0.5, 0.2]], ref=(0.0, 0.5)))
print(nondominated_filter([[0.2, 0.01], [0.1, 0.02], [0.2, 0.01]]).points)

# %%
# the exact rank-sum test on tiny samples
print(wilcoxon_rank_sum([1, 2, 3], [4, 5, 6]))

# %%
rng = np.random.default_rng(0)
samples = [
    MetricSample("levy", "toy", "IGD", rng.normal(3e-5, 5e-6, 51)),
    MetricSample("de", "toy", "IGD", rng.normal(6e-5, 5e-6, 51)),
]
print(summarize(samples[0]))
marked = mark_winners({("toy", "IGD"): samples}, {"IGD": "lower"})
print(grid_to_csv(marked, ["levy", "de"]))
