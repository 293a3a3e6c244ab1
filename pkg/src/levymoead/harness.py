"""Experiment runner: presets, seeding, persistence and plot-data files.

A bundle directory produced by :func:`run_experiment` looks like::

    out/
      config.json                  resolved ExperimentConfig
      runs/<algorithm>_<rep>.json  one RunRecord per run
      metrics.csv                  final six metrics per run
      grid.csv, grid.json          best/median/std per metric, winner flags
      plots/igd_by_generation.csv
      plots/population_objectives.csv
      plots/step_length_histogram.csv
      plots/long_trial_counts_by_generation.csv

Every random number in a run derives from ``base_seed + rep``, so runs can be
scheduled in any order or in parallel without changing the output.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .algorithms import ALGORITHMS, AlgorithmConfig
from .algorithms import run as run_algorithm
from .datasets import DATASETS, load_frontier, load_universe, resolve_dataset
from .metrics import LOWER_IS_BETTER, METRIC_NAMES, hypervolume, nadir_reference, nondominated_filter
from .operators import LevyParams, OperatorConfig
from .record import RunRecord, log_trial
from .stats import MetricSample, grid_to_csv, grid_to_json, mark_winners

__all__ = [
    "HV_REFERENCES",
    "ExperimentConfig",
    "ConfigError",
    "experiment_presets",
    "algorithm_config",
    "run_experiment",
    "load_bundle",
    "aggregate",
    "emit_plots",
    "long_trial_counts",
    "log_trial",
    "RunRecord",
]

logger = logging.getLogger(__name__)

HV_REFERENCES = {
    "hangseng": (0.0026, 0.0048),
    "dax100": (0.0019, 0.0028),
    "ftse100": (0.0024, 0.0028),
    "sp100": (0.0018, 0.0031),
    "nikkei": (-0.0026, 0.0017),
}

DEFAULT_HIST_EDGES = (0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0, 1.5)
LONG_TRIAL = 0.2


class ConfigError(ValueError):
    """Invalid experiment configuration; the message starts with the offending field path."""


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a batch of runs.

    ``params`` maps an algorithm id to overrides of :class:`AlgorithmConfig`
    fields (nested ``levy`` / ``ops`` dicts allowed). ``hv_mode`` is
    ``"fixed"`` (the per-dataset reference in ``HV_REFERENCES``, or ``hv_ref``) or
    ``"nadir"`` (worst return and risk over all final populations).
    """

    algorithms: list = field(default_factory=lambda: ["levy", "dem", "de", "ga", "nsga2"])
    dataset: str = ""
    universe_path: str = ""
    frontier_path: str = ""
    data_dir: str = ""
    params: dict = field(default_factory=dict)
    repetitions: int = 51
    max_gen: int = 1500
    N: int = 100
    T: int = 20
    sigma: float = 0.9
    n_r: int = 2
    early_stop_window: int = 100
    early_stop_tol: float = 1e-5
    base_seed: int = 0
    hv_mode: str = "fixed"
    hv_ref: list | None = None
    hist_edges: list = field(default_factory=lambda: list(DEFAULT_HIST_EDGES))
    snapshot_generations: list = field(default_factory=lambda: [1, 3, 5, 10, 50, 100])
    log_steps: bool = True
    workers: int = 1
    out: str = "results"
    alpha: float = 0.05

    def validate(self):
        if not isinstance(self.algorithms, list) or not self.algorithms:
            raise ConfigError("algorithms: must be a non-empty list")
        for k, alg in enumerate(self.algorithms):
            if alg not in ALGORITHMS:
                raise ConfigError(f"algorithms[{k}]: unknown algorithm {alg!r}; expected one of {list(ALGORITHMS)}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ConfigError("algorithms: duplicate entries")
        if self.repetitions < 1:
            raise ConfigError("repetitions: must be >= 1")
        if self.max_gen < 0:
            raise ConfigError("max_gen: must be >= 0")
        if self.hv_mode not in ("fixed", "nadir"):
            raise ConfigError("hv_mode: must be 'fixed' or 'nadir'")
        if self.hv_ref is not None and len(self.hv_ref) != 2:
            raise ConfigError("hv_ref: must be a (return, risk) pair")
        if not self.dataset and not (self.universe_path and self.frontier_path):
            raise ConfigError("dataset: give a dataset name or both universe_path and frontier_path")
        if list(self.hist_edges) != sorted(self.hist_edges) or len(self.hist_edges) < 2:
            raise ConfigError("hist_edges: must be an increasing list of at least two edges")
        for alg, over in self.params.items():
            if alg not in ALGORITHMS:
                raise ConfigError(f"params.{alg}: unknown algorithm")
            try:
                algorithm_config(self, alg)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"params.{alg}: {exc}") from None
        return self

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, doc, path="config"):
        known = {f.name for f in fields(cls)}
        for key in doc:
            if key not in known:
                raise ConfigError(f"{path}.{key}: unknown field")
        return cls(**doc)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _exp_common(**kw):
    return ExperimentConfig(**kw)


def experiment_presets(name) -> ExperimentConfig:
    """The two experiment set-ups.

    ``exp1`` compares Levy, DEM, DE, GA and NSGA-II; ``exp2`` compares the
    Levy, uniform, normal and constant scale factors without polynomial
    mutation. Both use N=100, 1500 generations, T=20, sigma=0.9, n_r=2 and
    51 repetitions.
    """
    if name == "exp1":
        return _exp_common(
            algorithms=["levy", "dem", "de", "ga", "nsga2"],
            params={
                "levy": {"levy": {"alpha0": 1e-5, "beta": 0.3}, "ops": {"p_mut": None}},
                "dem": {"ops": {"F": 1.3, "CR": 1.0, "p_mut": None}},
                "de": {"ops": {"F": 1.3, "CR": 1.0}},
                "ga": {"ops": {"pc": 0.7, "p_mut": 0.05}},
                "nsga2": {"ops": {"pc": 0.7, "p_mut": 0.01}},
            },
        )
    if name == "exp2":
        return _exp_common(
            algorithms=["levy", "unif", "norm", "const"],
            params={
                "levy": {"levy": {"alpha0": 1e-5, "beta": 0.3}, "polynomial": False},
                "unif": {"ops": {"C": 1.0}, "polynomial": False},
                "norm": {"ops": {"C": 0.5}, "polynomial": False},
                "const": {"ops": {"F": 1.3, "CR": 1.0}, "polynomial": False},
            },
        )
    raise ValueError(f"unknown preset {name!r}; expected 'exp1' or 'exp2'")


def algorithm_config(cfg: ExperimentConfig, algorithm) -> AlgorithmConfig:
    """Resolve the :class:`AlgorithmConfig` of one algorithm in an experiment."""
    over = dict(cfg.params.get(algorithm, {}))
    levy = LevyParams(**over.pop("levy", {}))
    ops = OperatorConfig(**over.pop("ops", {}))
    base = dict(
        pipeline=algorithm,
        N=cfg.N,
        T=cfg.T,
        sigma=cfg.sigma,
        n_r=cfg.n_r,
        max_gen=cfg.max_gen,
        early_stop_window=cfg.early_stop_window,
        early_stop_tol=cfg.early_stop_tol,
        snapshot_generations=tuple(cfg.snapshot_generations),
        log_steps=cfg.log_steps,
        levy=levy,
        ops=ops,
    )
    base.update(over)
    return AlgorithmConfig(**base)


def _dataset_key(cfg):
    return cfg.dataset.lower().replace("&", "").replace(" ", "").replace("-", "").replace("_", "")


def _load(cfg):
    if cfg.universe_path and cfg.frontier_path:
        uni_path, front_path = Path(cfg.universe_path), Path(cfg.frontier_path)
    else:
        uni_path, front_path = resolve_dataset(cfg.dataset, cfg.data_dir or None)
    universe = load_universe(uni_path, name=cfg.dataset or uni_path.stem)
    frontier = load_frontier(front_path)
    return universe, frontier


def _fixed_hv_ref(cfg):
    if cfg.hv_ref is not None:
        return tuple(float(v) for v in cfg.hv_ref)
    key = _dataset_key(cfg)
    aliases = {"dax": "dax100", "ftse": "ftse100", "sp": "sp100"}
    return HV_REFERENCES.get(aliases.get(key, key))


def _one_run(args):
    universe, frontier, acfg, seed, hv_ref, dataset = args
    return run_algorithm(universe, frontier, acfg, seed, hv_ref=hv_ref, dataset=dataset)


def run_experiment(cfg: ExperimentConfig, universe=None, frontier=None) -> Path:
    """Run every (algorithm, repetition) pair and write the bundle.

    ``universe``/``frontier`` may be passed directly to skip file loading.
    Returns the bundle directory.
    """
    cfg.validate()
    if universe is None or frontier is None:
        universe, frontier = _load(cfg)
    out = Path(cfg.out)
    (out / "runs").mkdir(parents=True, exist_ok=True)
    hv_ref = _fixed_hv_ref(cfg) if cfg.hv_mode == "fixed" else None
    if cfg.hv_mode == "fixed" and hv_ref is None:
        logger.warning("no fixed HV reference for dataset %r; HV will be NaN", cfg.dataset)
    label = cfg.dataset or universe.name
    tasks = []
    for alg in cfg.algorithms:
        acfg = algorithm_config(cfg, alg)
        for rep in range(cfg.repetitions):
            tasks.append((universe, frontier, acfg, cfg.base_seed + rep, hv_ref, label))

    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_one_run, tasks))
    else:
        records = [_one_run(t) for t in tasks]

    if cfg.hv_mode == "nadir":
        ref = nadir_reference([r.final_objectives for r in records])
        for r in records:
            r.metrics["HV"] = hypervolume(nondominated_filter(r.final_objectives).points, ref)
        hv_ref = ref

    reps = {}
    for rec in records:
        rep = rec.seed - cfg.base_seed
        reps[(rec.algorithm, rep)] = rec
        (out / "runs" / f"{rec.algorithm}_{rep:03d}.json").write_text(rec.to_json())

    doc = cfg.to_dict()
    doc["resolved_hv_ref"] = list(hv_ref) if hv_ref is not None else None
    (out / "config.json").write_text(json.dumps(doc, sort_keys=True, indent=1))
    _write_aggregates(out, cfg.algorithms, records, label, cfg.alpha)
    emit_plots(records, out / "plots", cfg.hist_edges)
    return out


def metrics_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "seed", "generations", "stopped_early", *METRIC_NAMES])
    for r in records:
        row = [r.algorithm, r.seed, r.generations, int(r.stopped_early)]
        row += [_fmt(r.metrics.get(m, float("nan"))) for m in METRIC_NAMES]
        w.writerow(row)
    return buf.getvalue()


def _fmt(v):
    v = float(v)
    return "nan" if not np.isfinite(v) else f"{v:.12g}"


def aggregate(records, algorithms, dataset, alpha=0.05):
    """Build the marked best/median/std grid from run records."""
    grid = {}
    for m in METRIC_NAMES:
        samples = []
        for alg in algorithms:
            vals = [r.metrics.get(m, float("nan")) for r in records if r.algorithm == alg]
            if vals and any(np.isfinite(vals)):
                samples.append(MetricSample(alg, dataset, m, tuple(vals)))
        if samples:
            grid[(dataset, m)] = samples
    directions = {m: "lower" if LOWER_IS_BETTER[m] else "higher" for m in METRIC_NAMES}
    return mark_winners(grid, directions, alpha)


def _write_aggregates(out, algorithms, records, dataset, alpha):
    records = sorted(records, key=lambda r: (list(algorithms).index(r.algorithm), r.seed))
    (out / "metrics.csv").write_text(metrics_csv(records))
    marked = aggregate(records, algorithms, dataset, alpha)
    (out / "grid.csv").write_text(grid_to_csv(marked, algorithms))
    (out / "grid.json").write_text(grid_to_json(marked, algorithms, alpha))


def load_bundle(path):
    """Read a bundle's config and run records back from disk."""
    path = Path(path)
    cfg = json.loads((path / "config.json").read_text())
    records = [RunRecord.from_json(p.read_text()) for p in sorted((path / "runs").glob("*.json"))]
    return cfg, records


def long_trial_counts(record: RunRecord, threshold=LONG_TRIAL) -> dict:
    """Per generation, how many successful trials had a step longer than ``threshold``."""
    steps = record.steps
    counts = {g: 0 for g in range(1, record.generations + 1)}
    hit = (steps[:, 1] > threshold) & (steps[:, 2] > 0)
    for g in steps[hit, 0].astype(int):
        counts[int(g)] += 1
    return counts


def emit_plots(records, out_dir, hist_edges=DEFAULT_HIST_EDGES):
    """Write the plot-data CSVs; an empty ``records`` still yields headed files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = sorted(records, key=lambda r: (r.algorithm, r.seed))
    edges = np.asarray(hist_edges, dtype=float)

    with open(out_dir / "igd_by_generation.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "seed", "generation", "igd"])
        for r in records:
            for g, v in enumerate(r.igd_trace):
                w.writerow([r.algorithm, r.seed, g, _fmt(v)])

    with open(out_dir / "population_objectives.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "seed", "generation", "return", "risk"])
        for r in records:
            for g in sorted(r.snapshots):
                for ret, risk in np.asarray(r.snapshots[g]):
                    w.writerow([r.algorithm, r.seed, g, _fmt(ret), _fmt(risk)])

    with open(out_dir / "step_length_histogram.csv", "w", newline="") as fh:
        fh.write("# bucket_edges=" + ",".join(f"{e:g}" for e in edges) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "seed", "generation", "bucket_lo", "bucket_hi", "trials", "successful_trials"])
        for r in records:
            steps = r.steps
            if steps.size == 0:
                continue
            for g in np.unique(steps[:, 0]).astype(int):
                sel = steps[steps[:, 0] == g]
                # lengths beyond the last edge land in the last bucket
                lengths = np.minimum(sel[:, 1], edges[-1])
                all_c, _ = np.histogram(lengths, bins=edges)
                ok_c, _ = np.histogram(lengths[sel[:, 2] > 0], bins=edges)
                for k in range(len(edges) - 1):
                    w.writerow([r.algorithm, r.seed, g, f"{edges[k]:g}", f"{edges[k + 1]:g}", all_c[k], ok_c[k]])

    with open(out_dir / "long_trial_counts_by_generation.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "seed", "generation", "long_successes"])
        for r in records:
            if not r.step_log:
                continue
            for g, c in long_trial_counts(r).items():
                w.writerow([r.algorithm, r.seed, g, c])
    return out_dir


def with_overrides(cfg: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(cfg, **kw)
