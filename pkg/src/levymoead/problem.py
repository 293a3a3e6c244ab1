"""Mean-variance objectives and the unit-simplex repair."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "ObjectivePoint",
    "PortfolioSolution",
    "DegenerateWeightsError",
    "evaluate",
    "evaluate_many",
    "repair",
    "repair_or_uniform",
    "random_solution",
]


_SUM_TOL = 4 * np.finfo(float).eps


class DegenerateWeightsError(ValueError):
    """Repair input has no positive entry, so it cannot be rescaled."""


class ObjectivePoint(NamedTuple):
    """Objective vector in canonical orientation: ``ret`` maximized, ``risk`` minimized."""

    ret: float
    risk: float


def evaluate(weights, universe) -> ObjectivePoint:
    """Portfolio return ``r'w`` and variance ``w' S w``."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (universe.n,):
        raise ValueError(f"weights have shape {w.shape}, universe has {universe.n} assets")
    return ObjectivePoint(float(universe.mean_returns @ w), float(w @ universe.covariance @ w))


def evaluate_many(weights, universe) -> np.ndarray:
    """Row-wise :func:`evaluate` for an ``(m, n)`` weight matrix, returned as ``(m, 2)``."""
    W = np.atleast_2d(np.asarray(weights, dtype=float))
    if W.shape[1] != universe.n:
        raise ValueError(f"weights have {W.shape[1]} columns, universe has {universe.n} assets")
    ret = W @ universe.mean_returns
    risk = np.einsum("ij,jk,ik->i", W, universe.covariance, W)
    return np.column_stack([ret, risk])


def repair(weights) -> np.ndarray:
    """Clip negative weights to zero, then rescale to unit sum.

    Raises
    ------
    DegenerateWeightsError
        If no entry is positive.
    """
    y = np.maximum(np.asarray(weights, dtype=float), 0.0)
    s = y.sum()
    if not s > 0.0:
        raise DegenerateWeightsError("all weights are non-positive; cannot rescale to the simplex")
    # input already on the simplex up to rounding passes through, which makes repair idempotent
    if abs(s - 1.0) <= _SUM_TOL * y.shape[0]:
        return y
    return y / s


def repair_or_uniform(weights) -> np.ndarray:
    """:func:`repair`, falling back to the equal-weight portfolio on degenerate input."""
    try:
        return repair(weights)
    except DegenerateWeightsError:
        n = np.asarray(weights).shape[0]
        return np.full(n, 1.0 / n)


@dataclass(frozen=True, eq=False)
class PortfolioSolution:
    """Feasible weight vector with its objectives cached at construction."""

    weights: np.ndarray
    objectives: ObjectivePoint

    def __post_init__(self):
        self.weights.setflags(write=False)

    @classmethod
    def from_weights(cls, weights, universe):
        w = np.array(weights, dtype=float)
        return cls(w, evaluate(w, universe))

    @property
    def ret(self):
        return self.objectives.ret

    @property
    def risk(self):
        return self.objectives.risk


def random_solution(n, rng, universe=None):
    """Uniform(0, 1) draw per asset followed by repair.

    Returns a :class:`PortfolioSolution` when ``universe`` is given, otherwise
    the weight vector.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        u = rng.random(n)
        if u.sum() > 0.0:
            break
    w = repair(u)
    if universe is None:
        return w
    return PortfolioSolution(w, evaluate(w, universe))
