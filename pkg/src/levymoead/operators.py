"""Variation operators.

Difference-based mutations (Levy flight, DE, uniform/normal scaled) return raw
vectors: no clamping, feasibility is restored by :func:`levymoead.problem.repair`.
SBX and polynomial mutation are the bounded operators of Deb's NSGA-II
lineage on ``[0, 1]`` genes.

Every operator takes an explicit ``numpy.random.Generator``; replaying a
generator state replays the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LevyParams",
    "OperatorConfig",
    "mantegna_sigma",
    "mantegna_sample",
    "levy_mutation",
    "de_mutation",
    "scaled_diff_mutation",
    "polynomial_mutation",
    "sbx_crossover",
    "select_parents",
]

BETA_MIN, BETA_MAX = 0.3, 1.99


@dataclass(frozen=True)
class LevyParams:
    """Scale ``alpha0`` and stability index ``beta`` of the Levy-flight step."""

    alpha0: float = 1e-5
    beta: float = 0.3

    def __post_init__(self):
        if not self.alpha0 > 0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")
        if not BETA_MIN <= self.beta <= BETA_MAX:
            raise ValueError(f"beta must lie in [{BETA_MIN}, {BETA_MAX}], got {self.beta}")


@dataclass(frozen=True)
class OperatorConfig:
    """Numeric knobs for the non-Levy operators.

    ``p_mut=None`` means one over the number of genes.
    """

    F: float = 1.3
    CR: float = 1.0
    C: float = 1.0
    eta_c: float = 20.0
    eta_m: float = 20.0
    pc: float = 0.7
    p_mut: float | None = None

    def __post_init__(self):
        for name in ("CR", "pc"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.p_mut is not None and not 0.0 <= self.p_mut <= 1.0:
            raise ValueError(f"p_mut must lie in [0, 1], got {self.p_mut}")
        for name in ("F", "C", "eta_c", "eta_m"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def mutation_rate(self, n):
        return 1.0 / n if self.p_mut is None else self.p_mut


def mantegna_sigma(beta) -> float:
    """Standard deviation of the numerator Gaussian in Mantegna's algorithm."""
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


def mantegna_sample(beta, rng, size=None):
    """Symmetric Levy-stable draws ``u / |v|**(1/beta)``.

    ``u ~ N(0, sigma_u**2)`` and ``v ~ N(0, 1)``; the numerator block is drawn
    before the denominator block. A ``v`` of exactly zero is redrawn.
    """
    if not BETA_MIN <= beta <= BETA_MAX:
        raise ValueError(f"beta must lie in [{BETA_MIN}, {BETA_MAX}], got {beta}")
    sigma_u = mantegna_sigma(beta)
    u = sigma_u * np.asarray(rng.standard_normal(size), dtype=float)
    v = np.abs(np.asarray(rng.standard_normal(size), dtype=float))
    zero = v == 0.0
    while np.any(zero):
        v = np.where(zero, np.abs(np.asarray(rng.standard_normal(size), dtype=float)), v)
        zero = v == 0.0
    out = u / v ** (1.0 / beta)
    return float(out) if size is None else out


def levy_mutation(xi, xj, params: LevyParams, rng) -> np.ndarray:
    """``y = xi + alpha0 * (xi - xj) * L`` with one Levy draw per gene."""
    xi = np.asarray(xi, dtype=float)
    xj = np.asarray(xj, dtype=float)
    steps = mantegna_sample(params.beta, rng, size=xi.shape)
    return xi + params.alpha0 * (xi - xj) * steps


def de_mutation(xi, xj, xk, F, CR, rng) -> np.ndarray:
    """DE/curr/1 with a single whole-vector crossover draw.

    With probability ``CR`` returns ``xi + F (xj - xk)``, otherwise ``xi``.
    ``CR == 1`` never consumes a random number.
    """
    xi = np.asarray(xi, dtype=float)
    if CR >= 1.0 or (CR > 0.0 and rng.random() < CR):
        return xi + F * (np.asarray(xj, dtype=float) - np.asarray(xk, dtype=float))
    return xi.copy()


def scaled_diff_mutation(xi, xj, xk, C, dist, rng) -> np.ndarray:
    """``y = xi + C (xj - xk) * s`` with ``s`` drawn per gene.

    ``dist`` is ``"uniform"`` for Unif(-1, 1) or ``"normal"`` for N(0, 1).
    """
    xi = np.asarray(xi, dtype=float)
    if dist == "uniform":
        s = rng.uniform(-1.0, 1.0, size=xi.shape)
    elif dist == "normal":
        s = rng.standard_normal(size=xi.shape)
    else:
        raise ValueError(f"unknown scale distribution {dist!r}")
    return xi + C * (np.asarray(xj, dtype=float) - np.asarray(xk, dtype=float)) * s


def polynomial_mutation(x, p_mut, eta_m, rng, lower=0.0, upper=1.0) -> np.ndarray:
    """Bounded polynomial mutation (Deb & Goyal, NSGA-II variant).

    Each gene mutates independently with probability ``p_mut``. Two uniform
    numbers are drawn per gene (selection, then perturbation) whatever the
    outcome, so the stream consumption does not depend on the data.
    """
    x = np.asarray(x, dtype=float)
    y = x.copy()
    hit = rng.random(x.shape) < p_mut
    u = rng.random(x.shape)
    if not np.any(hit):
        return y
    span = upper - lower
    xv = np.clip(x[hit], lower, upper)
    uu = u[hit]
    d1 = (xv - lower) / span
    d2 = (upper - xv) / span
    mpow = 1.0 / (eta_m + 1.0)
    low = uu < 0.5
    dq = np.empty_like(xv)
    xy = 1.0 - d1[low]
    val = 2.0 * uu[low] + (1.0 - 2.0 * uu[low]) * xy ** (eta_m + 1.0)
    dq[low] = val**mpow - 1.0
    xy = 1.0 - d2[~low]
    val = 2.0 * (1.0 - uu[~low]) + 2.0 * (uu[~low] - 0.5) * xy ** (eta_m + 1.0)
    dq[~low] = 1.0 - val**mpow
    y[hit] = np.clip(xv + dq * span, lower, upper)
    return y


def sbx_crossover(p1, p2, pc, eta_c, rng, lower=0.0, upper=1.0, clamp=True):
    """Simulated binary crossover, per gene pair with probability ``pc``.

    Uses the unbounded spread ``beta_q`` so that, before clamping, each child
    pair is symmetric around the parents' mean. ``clamp=False`` exposes the
    unclamped children.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    hit = rng.random(p1.shape) < pc
    u = rng.random(p1.shape)
    beta_q = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta_c + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0)),
    )
    mean = 0.5 * (p1 + p2)
    half = 0.5 * beta_q * (p2 - p1)
    c1 = np.where(hit, mean - half, p1)
    c2 = np.where(hit, mean + half, p2)
    if clamp:
        c1 = np.clip(c1, lower, upper)
        c2 = np.clip(c2, lower, upper)
    return c1, c2


def select_parents(i, pool, scheme, rng):
    """Parent indices for one offspring.

    ``"curr-plus-random"`` gives ``(i, j)`` with ``j`` uniform over ``pool``.
    ``"three-random"`` gives ``(i, j, k)`` with ``j != k`` drawn from ``pool``
    without replacement; either may equal ``i``. ``"two-random"`` gives two
    distinct pool members (both parents random, as in the GA pipeline).
    """
    pool = np.asarray(pool)
    if pool.size == 0:
        raise ValueError("mating pool is empty")
    if scheme == "curr-plus-random":
        return int(i), int(pool[rng.integers(pool.size)])
    if scheme == "three-random":
        if pool.size < 2:
            raise ValueError("three-random selection needs a pool of at least 2")
        j, k = rng.choice(pool.size, size=2, replace=False)
        return int(i), int(pool[j]), int(pool[k])
    if scheme == "two-random":
        if pool.size < 2:
            raise ValueError("two-random selection needs a pool of at least 2")
        j, k = rng.choice(pool.size, size=2, replace=False)
        return int(pool[j]), int(pool[k])
    raise ValueError(f"unknown selection scheme {scheme!r}")
