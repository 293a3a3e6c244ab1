"""Tchebycheff scalarizations for the bi-objective portfolio problem.

Scalarizers work in minimization orientation: an objective pair
``(ret, risk)`` enters as ``(-ret, risk)``. ``to_min`` performs that map;
every array of objective values handled here is already in that orientation
unless stated otherwise.

The NBI-style variant spreads reference points evenly over the segment
between the two extreme points (the convex hull of individual minima for two
objectives) and scalarizes every subproblem with one shared normal vector:

    g(x | lam, r) = max_m lam_m * (f_m(x) - r_m)
    lam = (|F2_2 - F1_2|, |F2_1 - F1_1|)

The difference is signed; a candidate below the reference point on both
objectives scores negative.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "to_min",
    "tchebycheff",
    "nbi_tchebycheff",
    "nbi_values",
    "classic_weights",
    "make_reference_points",
    "neighborhoods",
    "ScalarizationContext",
]


def to_min(points) -> np.ndarray:
    """Map ``(ret, risk)`` rows to minimization orientation ``(-ret, risk)``."""
    p = np.array(points, dtype=float)
    p[..., 0] = -p[..., 0]
    return p


def tchebycheff(f, weights, ideal) -> float:
    """Classic Tchebycheff value ``max_m w_m |f_m - z*_m|``.

    All three arguments are in minimization orientation.
    """
    f = np.asarray(f, dtype=float)
    return float(np.max(np.asarray(weights) * np.abs(f - np.asarray(ideal))))


def nbi_tchebycheff(f, ctx, i) -> float:
    """NBI-style Tchebycheff value of ``f`` (minimization orientation) for subproblem ``i`` (0-based)."""
    f = np.asarray(f, dtype=float)
    return float(np.max(ctx.normal * (f - ctx.reference_points[i])))


def nbi_values(F, normal, refs) -> np.ndarray:
    """Vectorized NBI-style Tchebycheff: row ``k`` of ``F`` scored against row ``k`` of ``refs``."""
    return np.max(normal * (F - refs), axis=-1)


def classic_weights(N) -> np.ndarray:
    """``N`` evenly spaced weight pairs summing to one, from ``(1, 0)`` to ``(0, 1)``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N == 1:
        return np.array([[0.5, 0.5]])
    a = np.arange(N - 1, -1, -1) / (N - 1)
    return np.column_stack([a, 1.0 - a])


def make_reference_points(F1, F2, N) -> np.ndarray:
    """Evenly spaced points ``r_i = a_i F1 + (1 - a_i) F2`` with ``a_i = (N - i) / (N - 1)``.

    ``i`` runs 1..N, so the first point is ``F1`` and the last ``F2``.
    """
    if N < 2:
        raise ValueError("at least two reference points are needed")
    F1 = np.asarray(F1, dtype=float)
    F2 = np.asarray(F2, dtype=float)
    a = (N - np.arange(1, N + 1)) / (N - 1)
    return a[:, None] * F1 + (1.0 - a)[:, None] * F2


def neighborhoods(points, T) -> np.ndarray:
    """Indices of the ``T`` nearest rows of ``points`` for every row.

    Ordering is by Euclidean distance with ties broken by lower index, except
    that a row always lists itself first (matters only when points coincide).
    """
    P = np.asarray(points, dtype=float)
    N = P.shape[0]
    if not 1 <= T <= N:
        raise ValueError(f"neighborhood size T={T} must be in 1..{N}")
    D = np.sqrt(((P[:, None, :] - P[None, :, :]) ** 2).sum(axis=-1))
    idx = np.arange(N)
    D[idx, idx] = -1.0
    order = np.argsort(D, axis=1, kind="stable")
    return order[:, :T]


class ScalarizationContext:
    """Reference geometry shared by every subproblem of one run.

    Holds the extreme points ``F1`` (best return) and ``F2`` (lowest risk),
    the normal vector, the reference points and the neighborhood table, all in
    minimization orientation. The classic Tchebycheff weights and ideal point
    are kept alongside for the plain decomposition.

    Parameters
    ----------
    N : int
        Number of subproblems.
    T : int
        Neighborhood size.
    initial : array_like, shape (m, 2)
        Objective values (minimization orientation) used to set the extremes
        and the ideal point.
    """

    def __init__(self, N, T, initial):
        if N < 2:
            raise ValueError("N must be >= 2")
        self.N = N
        self.T = T
        init = np.asarray(initial, dtype=float)
        # F1 minimizes objective 1 (=> best return), F2 minimizes objective 2 (risk)
        self.F1 = init[np.lexsort((init[:, 1], init[:, 0]))[0]].copy()
        self.F2 = init[np.lexsort((init[:, 0], init[:, 1]))[0]].copy()
        self.ideal = init.min(axis=0)
        self.classic_weights = classic_weights(N)
        self.classic_neighbors = neighborhoods(self.classic_weights, T)
        self._recompute()

    def _recompute(self):
        self.normal = np.abs(np.array([self.F2[1] - self.F1[1], self.F2[0] - self.F1[0]]))
        self.reference_points = make_reference_points(self.F1, self.F2, self.N)
        self.neighbors = neighborhoods(self.reference_points, self.T)

    def update_extremes(self, f) -> bool:
        """Fold a new objective vector into the extremes and the ideal point.

        Returns True when ``F1`` or ``F2`` moved, in which case the normal
        vector, reference points and neighborhoods have been recomputed.
        """
        f = np.asarray(f, dtype=float)
        self.ideal = np.minimum(self.ideal, f)
        moved = False
        if f[0] < self.F1[0] or (f[0] == self.F1[0] and f[1] < self.F1[1]):
            self.F1 = f.copy()
            moved = True
        if f[1] < self.F2[1] or (f[1] == self.F2[1] and f[0] < self.F2[0]):
            self.F2 = f.copy()
            moved = True
        if moved:
            self._recompute()
        return moved

    def nbi(self, F, subproblems) -> np.ndarray:
        """NBI-style values of rows of ``F`` for the matching ``subproblems`` indices."""
        return nbi_values(np.asarray(F), self.normal, self.reference_points[subproblems])

    def classic(self, F, subproblems) -> np.ndarray:
        """Classic Tchebycheff values of rows of ``F`` for the matching ``subproblems``."""
        F = np.asarray(F)
        return np.max(self.classic_weights[subproblems] * np.abs(F - self.ideal), axis=-1)
