"""Aggregation of repeated runs and the Wilcoxon rank-sum test."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr
from scipy.stats import rankdata

__all__ = [
    "MetricSample",
    "Summary",
    "summarize",
    "wilcoxon_rank_sum",
    "exact_rank_sum_distribution",
    "mark_winners",
    "grid_to_csv",
    "grid_to_json",
    "EXACT_LIMIT",
]

# exact null distribution when the smaller sample is below this size
EXACT_LIMIT = 20


@dataclass(frozen=True)
class MetricSample:
    algorithm: str
    dataset: str
    metric: str
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("a metric sample needs at least one value")
        object.__setattr__(self, "values", vals)

    @property
    def finite(self) -> np.ndarray:
        v = np.asarray(self.values)
        return v[np.isfinite(v)]


@dataclass(frozen=True)
class Summary:
    best: float
    median: float
    std: float


def summarize(sample, direction="lower") -> Summary:
    """Best, median and population standard deviation (divisor ``n``).

    Non-finite entries (undefined indicators) are dropped first. For an even
    count the median is the lower middle order statistic, so it is always an
    observed value.
    """
    v = sample.finite if isinstance(sample, MetricSample) else np.asarray(sample, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        raise ValueError("no finite values to summarize")
    s = np.sort(v)
    best = s[0] if direction == "lower" else s[-1]
    median = s[(s.size - 1) // 2]
    return Summary(float(best), float(median), float(np.std(v)))


def exact_rank_sum_distribution(ranks, m):
    """Null distribution of the sum of ``m`` ranks drawn without replacement.

    ``ranks`` may contain midranks; they are doubled to integers. Returns
    ``(sums, probabilities)`` with ``sums`` in rank units.
    """
    r2 = np.rint(2 * np.asarray(ranks, dtype=float)).astype(np.int64)
    total = int(r2.sum())
    # counts[k][s]: number of k-subsets with doubled sum s (float to avoid overflow)
    counts = np.zeros((m + 1, total + 1))
    counts[0, 0] = 1.0
    for x in r2:
        counts[1:, x:] += counts[:-1, : total + 1 - x].copy()
    c = counts[m]
    support = np.flatnonzero(c)
    probs = c[support] / c.sum()
    return support / 2.0, probs


def wilcoxon_rank_sum(a, b):
    """Two-sided Wilcoxon rank-sum (Mann-Whitney) test.

    Returns ``(W, p)`` where ``W`` is the rank sum of ``a`` under midranks.
    When the smaller sample has fewer than ``EXACT_LIMIT`` values the
    p-value is exact, ``P(|W - E W| >= |w - E W|)`` over all assignments of
    the pooled ranks; otherwise a normal approximation with tie-corrected
    variance and continuity correction is used. Fully tied data give 1.0.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    pooled = np.concatenate([a, b])
    ranks = rankdata(pooled)
    n1, n2 = a.size, b.size
    N = n1 + n2
    W = float(ranks[:n1].sum())
    mean = n1 * (N + 1) / 2.0
    if np.all(pooled == pooled[0]):
        return W, 1.0
    dev = abs(W - mean)
    if min(n1, n2) < EXACT_LIMIT:
        sums, probs = exact_rank_sum_distribution(ranks, n1)
        p = float(probs[np.abs(sums - mean) >= dev - 1e-9].sum())
        return W, min(1.0, p)
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float((tie_counts**3 - tie_counts).sum())
    var = n1 * n2 / 12.0 * ((N + 1) - tie_term / (N * (N - 1)))
    z = max(dev - 0.5, 0.0) / math.sqrt(var)
    p = 2.0 * float(ndtr(-z))
    return W, min(1.0, p)


def mark_winners(grid, directions, alpha=0.05):
    """Flag the best-median algorithm per (dataset, metric) cell.

    Parameters
    ----------
    grid : dict
        ``{(dataset, metric): [MetricSample, ...]}`` with samples in
        algorithm order; that order breaks median ties.
    directions : dict
        ``{metric: "lower" | "higher"}``.
    alpha : float
        Significance level for the best vs second-best rank-sum test.

    Returns
    -------
    dict
        ``{(dataset, metric): {"summaries": {alg: Summary}, "best": alg,
        "second": alg or None, "p_value": float or None, "significant": bool}}``
    """
    out = {}
    for key, samples in grid.items():
        metric = key[1]
        direction = directions[metric]
        sums = {s.algorithm: summarize(s, direction) for s in samples}
        sign = 1.0 if direction == "lower" else -1.0
        order = sorted(range(len(samples)), key=lambda k: (sign * sums[samples[k].algorithm].median, k))
        best = samples[order[0]]
        cell = {"summaries": sums, "best": best.algorithm, "second": None, "p_value": None, "significant": False}
        if len(order) > 1:
            second = samples[order[1]]
            _, p = wilcoxon_rank_sum(best.finite, second.finite)
            cell.update(second=second.algorithm, p_value=p, significant=bool(p < alpha))
        out[key] = cell
    return out


def _fmt(v):
    return "nan" if v is None or not np.isfinite(v) else f"{v:.12g}"


def grid_to_csv(marked, algorithms) -> str:
    """Tables-style CSV: one row per (dataset, metric, statistic), one column per algorithm.

    The ``best`` and ``significant`` columns name the winning algorithm and
    whether it beat the runner-up at the chosen level.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dataset", "metric", "stat", *algorithms, "best", "significant", "p_value"])
    for (dataset, metric), cell in marked.items():
        for stat in ("best", "median", "std"):
            row = [dataset, metric, stat]
            for alg in algorithms:
                s = cell["summaries"].get(alg)
                row.append(_fmt(getattr(s, stat)) if s is not None else "")
            if stat == "median":
                row += [cell["best"], int(cell["significant"]), _fmt(cell["p_value"])]
            else:
                row += ["", "", ""]
            w.writerow(row)
    return buf.getvalue()


def grid_to_json(marked, algorithms, alpha=0.05) -> str:
    cells = []
    for (dataset, metric), cell in marked.items():
        cells.append(
            {
                "dataset": dataset,
                "metric": metric,
                "best": cell["best"],
                "second": cell["second"],
                "p_value": cell["p_value"],
                "significant": cell["significant"],
                "summaries": {
                    alg: {"best": s.best, "median": s.median, "std": s.std}
                    for alg, s in cell["summaries"].items()
                },
            }
        )
    doc = {
        "algorithms": list(algorithms),
        "alpha": alpha,
        "std_divisor": "n",
        "median": "lower middle order statistic",
        "test": f"two-sided Wilcoxon rank-sum; exact below {EXACT_LIMIT} per side, else normal approximation",
        "cells": cells,
    }
    return json.dumps(doc, sort_keys=True, indent=1)
