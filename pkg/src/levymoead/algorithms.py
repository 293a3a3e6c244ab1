"""MOEA/D engines and NSGA-II for the bi-objective portfolio problem.

All MOEA/D variants share one framework: NBI-style Tchebycheff
decomposition, a mating pool taken from the neighborhood with probability
``sigma`` (otherwise the whole population), and at most ``n_r`` replacements
per offspring. They differ only in the reproduction pipeline:

=========  =====================  ====================  ===================
pipeline   parents                variation             polynomial mutation
=========  =====================  ====================  ===================
levy       current + 1 random     Levy flight           yes, p = 1/n
dem        current + 2 random     DE (F)                yes, p = 1/n
de         current + 2 random     DE (F)                no
const      current + 2 random     DE (F)                no
ga         2 random               SBX, first child      yes, p = 0.05
unif       current + 2 random     C (xj - xk) U(-1, 1)  no
norm       current + 2 random     C (xj - xk) N(0, 1)   no
=========  =====================  ====================  ===================
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .decomposition import ScalarizationContext
from .metrics import all_metrics, igd, nondominated_filter
from .operators import (
    LevyParams,
    OperatorConfig,
    de_mutation,
    levy_mutation,
    polynomial_mutation,
    sbx_crossover,
    scaled_diff_mutation,
    select_parents,
)
from .problem import evaluate, evaluate_many, random_solution, repair_or_uniform
from .record import RunRecord, log_trial

__all__ = [
    "PIPELINES",
    "ALGORITHMS",
    "Pipeline",
    "AlgorithmConfig",
    "MoeadConfig",
    "RunState",
    "init_state",
    "moead_generation",
    "fast_non_dominated_sort",
    "crowding_distance",
    "nsga2_generation",
    "run",
]

_MIN = np.array([-1.0, 1.0])  # canonical (ret, risk) -> minimization orientation


@dataclass(frozen=True)
class Pipeline:
    selection: str
    variation: str
    polynomial: bool


PIPELINES = {
    "levy": Pipeline("curr-plus-random", "levy", True),
    "dem": Pipeline("three-random", "de", True),
    "de": Pipeline("three-random", "de", False),
    "const": Pipeline("three-random", "de", False),
    "ga": Pipeline("two-random", "sbx", True),
    "unif": Pipeline("three-random", "uniform", False),
    "norm": Pipeline("three-random", "normal", False),
}
ALGORITHMS = tuple(PIPELINES) + ("nsga2",)


@dataclass(frozen=True)
class AlgorithmConfig:
    """Parameters of one engine.

    ``pipeline`` is one of :data:`ALGORITHMS`. ``polynomial=None`` follows
    the pipeline table. ``early_stop_window=0`` disables early stopping.
    """

    pipeline: str = "levy"
    N: int = 100
    T: int = 20
    sigma: float = 0.9
    n_r: int = 2
    max_gen: int = 1500
    levy: LevyParams = field(default_factory=LevyParams)
    ops: OperatorConfig = field(default_factory=OperatorConfig)
    polynomial: bool | None = None
    decomposition: str = "nbi"
    early_stop_window: int = 100
    early_stop_tol: float = 1e-5
    snapshot_generations: tuple = (1, 3, 5, 10, 50, 100)
    log_steps: bool = True

    def __post_init__(self):
        if self.pipeline not in ALGORITHMS:
            raise ValueError(f"unknown pipeline {self.pipeline!r}; expected one of {ALGORITHMS}")
        if self.n_r < 1:
            raise ValueError("n_r must be >= 1")
        if not 1 <= self.T <= self.N:
            raise ValueError(f"T={self.T} must lie in 1..N={self.N}")
        if not 0.0 <= self.sigma <= 1.0:
            raise ValueError("sigma must lie in [0, 1]")
        if self.decomposition not in ("nbi", "tchebycheff"):
            raise ValueError(f"unknown decomposition {self.decomposition!r}")
        if self.max_gen < 0:
            raise ValueError("max_gen must be >= 0")

    @property
    def uses_polynomial(self) -> bool:
        if self.pipeline == "nsga2":
            return True
        return PIPELINES[self.pipeline].polynomial if self.polynomial is None else self.polynomial

    def to_dict(self) -> dict:
        d = asdict(self)
        d["snapshot_generations"] = list(self.snapshot_generations)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "levy" in d and isinstance(d["levy"], dict):
            d["levy"] = LevyParams(**d["levy"])
        if "ops" in d and isinstance(d["ops"], dict):
            d["ops"] = OperatorConfig(**d["ops"])
        if "snapshot_generations" in d:
            d["snapshot_generations"] = tuple(d["snapshot_generations"])
        return cls(**d)


MoeadConfig = AlgorithmConfig


@dataclass
class RunState:
    """Mutable population of one run: row ``i`` is the incumbent of subproblem ``i``."""

    weights: np.ndarray
    objectives: np.ndarray
    ctx: ScalarizationContext | None
    rng: np.random.Generator
    generation: int = 0
    record: RunRecord | None = None


def init_state(universe, cfg: AlgorithmConfig, rng, record=None) -> RunState:
    W = np.array([random_solution(universe.n, rng) for _ in range(cfg.N)])
    F = evaluate_many(W, universe)
    ctx = None
    if cfg.pipeline != "nsga2":
        ctx = ScalarizationContext(cfg.N, cfg.T, F * _MIN)
    return RunState(W, F, ctx, rng, 0, record)


def _scalar(ctx, cfg, Fmin, subproblems):
    if cfg.decomposition == "nbi":
        return ctx.nbi(Fmin, subproblems)
    return ctx.classic(Fmin, subproblems)


def _reproduce(state, cfg, universe, i, pool):
    rng = state.rng
    pipe = PIPELINES[cfg.pipeline]
    W = state.weights
    parents = select_parents(i, pool, pipe.selection, rng)
    if pipe.variation == "levy":
        y = levy_mutation(W[parents[0]], W[parents[1]], cfg.levy, rng)
    elif pipe.variation == "de":
        y = de_mutation(W[parents[0]], W[parents[1]], W[parents[2]], cfg.ops.F, cfg.ops.CR, rng)
    elif pipe.variation in ("uniform", "normal"):
        y = scaled_diff_mutation(W[parents[0]], W[parents[1]], W[parents[2]], cfg.ops.C, pipe.variation, rng)
    else:
        y, _ = sbx_crossover(W[parents[0]], W[parents[1]], cfg.ops.pc, cfg.ops.eta_c, rng)
    if cfg.uses_polynomial:
        y = polynomial_mutation(y, cfg.ops.mutation_rate(universe.n), cfg.ops.eta_m, rng)
    return repair_or_uniform(y)


def moead_generation(state: RunState, cfg: AlgorithmConfig, universe) -> RunState:
    """One pass over all subproblems in index order.

    For subproblem ``i``: choose the mating pool, reproduce and repair one
    offspring, fold it into the extreme points, then walk the pool in a fresh
    random order replacing every incumbent it scores no worse than, stopping
    after ``n_r`` replacements. With a degenerate normal vector (both
    extremes equal) nothing is replaced.
    """
    ctx = state.ctx
    rng = state.rng
    N = cfg.N
    everyone = np.arange(N)
    state.generation += 1
    gen = state.generation
    for i in range(N):
        if rng.random() < cfg.sigma:
            pool = ctx.classic_neighbors[i] if cfg.decomposition == "tchebycheff" else ctx.neighbors[i]
            # ascending order: the same index set always yields the same draws
            pool = np.sort(pool)
        else:
            pool = everyone
        y = _reproduce(state, cfg, universe, i, pool)
        fy = np.array(evaluate(y, universe))
        fy_min = fy * _MIN
        ctx.update_extremes(fy_min)

        order = rng.permutation(pool)
        successes = 0
        if cfg.decomposition == "tchebycheff" or np.any(ctx.normal):
            g_new = _scalar(ctx, cfg, np.broadcast_to(fy_min, (order.size, 2)), order)
            g_old = _scalar(ctx, cfg, state.objectives[order] * _MIN, order)
            winners = order[g_new <= g_old][: cfg.n_r]
            successes = int(winners.size)
        if state.record is not None and cfg.log_steps:
            log_trial(state.record, gen, y, state.weights[i], successes, cfg.n_r)
        if successes:
            state.weights[winners] = y
            state.objectives[winners] = fy
    return state


def fast_non_dominated_sort(F) -> tuple[list, np.ndarray]:
    """Pareto fronts of ``F`` (rows are objective vectors, all minimized).

    Returns the list of fronts (index arrays, ascending) and each row's rank
    (0 for the first front).
    """
    F = np.asarray(F, dtype=float)
    m = F.shape[0]
    le = (F[:, None, :] <= F[None, :, :]).all(axis=-1)
    lt = (F[:, None, :] < F[None, :, :]).any(axis=-1)
    dom = le & lt  # dom[a, b]: a dominates b
    count = dom.sum(axis=0)
    rank = np.full(m, -1)
    fronts = []
    current = np.flatnonzero(count == 0)
    r = 0
    while current.size:
        rank[current] = r
        fronts.append(current)
        count = count - dom[current].sum(axis=0)
        count[rank >= 0] = -1
        current = np.flatnonzero(count == 0)
        r += 1
    return fronts, rank


def crowding_distance(F) -> np.ndarray:
    """Crowding distance within one front; boundary points get ``inf``."""
    F = np.asarray(F, dtype=float)
    m, k = F.shape
    dist = np.zeros(m)
    if m <= 2:
        dist[:] = np.inf
        return dist
    for obj in range(k):
        order = np.argsort(F[:, obj], kind="stable")
        lo, hi = F[order[0], obj], F[order[-1], obj]
        dist[order[0]] = dist[order[-1]] = np.inf
        if hi == lo:
            continue
        dist[order[1:-1]] += (F[order[2:], obj] - F[order[:-2], obj]) / (hi - lo)
    return dist


def _rank_and_crowding(Fmin):
    fronts, rank = fast_non_dominated_sort(Fmin)
    crowd = np.zeros(Fmin.shape[0])
    for fr in fronts:
        crowd[fr] = crowding_distance(Fmin[fr])
    return rank, crowd


def _tournament(rank, crowd, rng):
    a, b = rng.integers(rank.size, size=2)
    if rank[a] != rank[b]:
        return a if rank[a] < rank[b] else b
    if crowd[a] != crowd[b]:
        return a if crowd[a] > crowd[b] else b
    return a


def nsga2_generation(state: RunState, cfg: AlgorithmConfig, universe) -> RunState:
    """Binary tournament, SBX + polynomial mutation, repair, then (mu + lambda) survival."""
    rng = state.rng
    N = cfg.N
    Fmin = state.objectives * _MIN
    rank, crowd = _rank_and_crowding(Fmin)
    p_mut = cfg.ops.mutation_rate(universe.n)
    kids = []
    while len(kids) < N:
        a = _tournament(rank, crowd, rng)
        b = _tournament(rank, crowd, rng)
        c1, c2 = sbx_crossover(state.weights[a], state.weights[b], cfg.ops.pc, cfg.ops.eta_c, rng)
        for c in (c1, c2):
            c = polynomial_mutation(c, p_mut, cfg.ops.eta_m, rng)
            kids.append(repair_or_uniform(c))
    kids = np.array(kids[:N])
    W = np.vstack([state.weights, kids])
    F = np.vstack([state.objectives, evaluate_many(kids, universe)])
    fronts, _ = fast_non_dominated_sort(F * _MIN)
    keep = []
    for fr in fronts:
        if len(keep) + fr.size <= N:
            keep.extend(fr.tolist())
            continue
        cd = crowding_distance(F[fr] * _MIN)
        order = np.lexsort((fr, -cd))
        keep.extend(fr[order[: N - len(keep)]].tolist())
        break
    keep = np.array(keep)
    state.weights = W[keep]
    state.objectives = F[keep]
    state.generation += 1
    return state


def _front_igd(F, frontier):
    return igd(nondominated_filter(F).points, frontier.points)


def run(universe, frontier, cfg: AlgorithmConfig, seed, hv_ref=None, dataset="") -> RunRecord:
    """One seeded run up to ``max_gen`` generations or early stop.

    IGD of the population's non-dominated subset is traced once per
    generation (index 0 is the initial population). The run stops early when
    the last ``early_stop_window`` IGD values span no more than
    ``early_stop_tol``.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    record = RunRecord(algorithm=cfg.pipeline, seed=int(seed), config=cfg.to_dict(), dataset=dataset)
    state = init_state(universe, cfg, rng, record)
    record.igd_trace.append(_front_igd(state.objectives, frontier))
    step = nsga2_generation if cfg.pipeline == "nsga2" else moead_generation
    snaps = set(cfg.snapshot_generations)
    window = cfg.early_stop_window
    while state.generation < cfg.max_gen:
        step(state, cfg, universe)
        record.igd_trace.append(_front_igd(state.objectives, frontier))
        if state.generation in snaps:
            record.snapshots[state.generation] = state.objectives.copy()
        if window and len(record.igd_trace) >= window:
            tail = record.igd_trace[-window:]
            if max(tail) - min(tail) <= cfg.early_stop_tol:
                record.stopped_early = True
                break
    record.generations = state.generation
    record.snapshots[state.generation] = state.objectives.copy()
    record.final_objectives = state.objectives.copy()
    record.final_weights = state.weights.copy()
    record.metrics = all_metrics(state.objectives, frontier, hv_ref)
    record.wall_time = time.perf_counter() - t0
    return record


def with_overrides(cfg: AlgorithmConfig, **kw) -> AlgorithmConfig:
    return replace(cfg, **kw)
