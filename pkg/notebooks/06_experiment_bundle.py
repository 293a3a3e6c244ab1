# %% [markdown]
# # Experiment presets and result bundles
#
# The harness runs every algorithm of a preset for a number of seeded
# repetitions and writes per-run records, the aggregated grid and plot data.
# With the OR-library files in data/orlib the same call takes
# ``dataset="hangseng"`` and no explicit universe; from a shell:
#
#     levymoead run --preset exp1 --dataset hangseng --reps 11 --out results/hs

# %%
import tempfile
from pathlib import Path

from levymoead.datasets import efficient_frontier, synthetic_universe
from levymoead.harness import ExperimentConfig, experiment_presets, load_bundle, run_experiment

u = synthetic_universe(31, seed=7)
frontier = efficient_frontier(u, 120)

cfg = experiment_presets("exp2")
print(cfg.algorithms, cfg.params["norm"])

# %%
out = Path(tempfile.mkdtemp()) / "bundle"
cfg = ExperimentConfig(**{**cfg.to_dict(), "dataset": "synthetic", "repetitions": 3, "max_gen": 30,
                          "out": str(out), "hv_mode": "nadir"})
run_experiment(cfg, u, frontier)
print(sorted(p.name for p in out.iterdir()))
print((out / "grid.csv").read_text())

# %%
_, records = load_bundle(out)
print(len(records), "runs;", sorted(p.name for p in (out / "plots").iterdir()))
