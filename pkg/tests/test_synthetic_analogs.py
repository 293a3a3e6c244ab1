"""Reduced-budget stand-ins for the OR-library reproduction checks.

The real-data checks live in test_acceptance.py. These run the same
pipelines on factor-model universes with QP-solved frontiers, so the
qualitative behavior stays covered when the OR-library files are absent.
Thresholds here are local choices, not published values.
"""

from dataclasses import replace

import numpy as np
import pytest

from levymoead.algorithms import run
from levymoead.datasets import efficient_frontier, synthetic_universe
from levymoead.harness import algorithm_config, experiment_presets, long_trial_counts
from levymoead.stats import summarize

pytestmark = pytest.mark.slow
SEEDS = range(3)


@pytest.fixture(scope="module")
def large_case():
    u = synthetic_universe(225, seed=11)
    return u, efficient_frontier(u, 200)


def test_levy_reaches_small_igd_on_31_assets(small_case):
    u, frontier = small_case
    cfg = replace(algorithm_config(experiment_presets("exp1"), "levy"), max_gen=300)
    igds = [run(u, frontier, cfg, seed=s).metrics["IGD"] for s in SEEDS]
    assert summarize(igds).median < 1e-4


def test_levy_beats_de_on_225_assets(large_case):
    u, frontier = large_case
    ref = (float(frontier.points[:, 0].min()), float(frontier.points[:, 1].max()))
    preset = experiment_presets("exp1")
    med = {}
    for alg in ("levy", "de"):
        cfg = replace(algorithm_config(preset, alg), max_gen=300)
        recs = [run(u, frontier, cfg, seed=s, hv_ref=ref) for s in SEEDS]
        med[alg] = {m: summarize([r.metrics[m] for r in recs]).median for m in ("HV", "IGD")}
    assert med["levy"]["IGD"] < med["de"]["IGD"]
    assert med["levy"]["HV"] > med["de"]["HV"]


def test_long_successful_steps_on_225_assets(large_case):
    u, frontier = large_case
    preset = experiment_presets("exp2")
    levy_counts = []
    for alg in preset.algorithms:
        cfg = replace(algorithm_config(preset, alg), max_gen=300, early_stop_window=0)
        for s in SEEDS:
            counts = long_trial_counts(run(u, frontier, cfg, seed=s))
            early = sum(counts[g] for g in range(1, 11))
            if alg == "levy":
                assert early > 0
                levy_counts.append(counts)
            else:
                assert early == 0, alg
    first = np.mean([[c[g] for g in range(1, 31)] for c in levy_counts])
    late = np.mean([[c[g] for g in range(100, 301)] for c in levy_counts])
    assert late < first
