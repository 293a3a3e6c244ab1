"""Per-run record: traces, final population, metrics and step-length log."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RunRecord", "log_trial"]


@dataclass
class RunRecord:
    """Everything one seeded run produces.

    ``step_log`` is a ``(k, 3)`` array of ``(generation, step length,
    successes)`` rows, one per offspring of a MOEA/D pipeline. ``snapshots``
    maps a generation number to the population's ``(N, 2)`` objectives.
    """

    algorithm: str
    seed: int
    config: dict
    igd_trace: list = field(default_factory=list)
    final_objectives: np.ndarray = None
    final_weights: np.ndarray = None
    metrics: dict = field(default_factory=dict)
    step_log: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    generations: int = 0
    stopped_early: bool = False
    wall_time: float = 0.0
    dataset: str = ""

    @property
    def steps(self) -> np.ndarray:
        return np.asarray(self.step_log, dtype=float).reshape(-1, 3)

    def to_dict(self, include_weights=True) -> dict:
        doc = {
            "algorithm": self.algorithm,
            "dataset": self.dataset,
            "seed": self.seed,
            "config": self.config,
            "generations": self.generations,
            "stopped_early": self.stopped_early,
            "wall_time": self.wall_time,
            "metrics": {k: _num(v) for k, v in self.metrics.items()},
            "igd_trace": [float(v) for v in self.igd_trace],
            "final_objectives": np.asarray(self.final_objectives).tolist(),
            "snapshots": {str(g): np.asarray(p).tolist() for g, p in sorted(self.snapshots.items())},
            "step_log": [[int(g), float(l), int(s)] for g, l, s in self.step_log],
        }
        if include_weights and self.final_weights is not None:
            doc["final_weights"] = np.asarray(self.final_weights).tolist()
        return doc

    def to_json(self, include_weights=True) -> str:
        return json.dumps(self.to_dict(include_weights), sort_keys=True)

    @classmethod
    def from_dict(cls, doc):
        rec = cls(
            algorithm=doc["algorithm"],
            seed=int(doc["seed"]),
            config=doc["config"],
            igd_trace=list(doc["igd_trace"]),
            final_objectives=np.asarray(doc["final_objectives"], dtype=float).reshape(-1, 2),
            metrics={k: (float("nan") if v is None else float(v)) for k, v in doc["metrics"].items()},
            step_log=[tuple(r) for r in doc["step_log"]],
            snapshots={int(g): np.asarray(p, dtype=float).reshape(-1, 2) for g, p in doc["snapshots"].items()},
            generations=int(doc["generations"]),
            stopped_early=bool(doc["stopped_early"]),
            wall_time=float(doc["wall_time"]),
            dataset=doc.get("dataset", ""),
        )
        if "final_weights" in doc:
            rec.final_weights = np.asarray(doc["final_weights"], dtype=float)
        return rec

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _num(v):
    v = float(v)
    return None if not np.isfinite(v) else v


def log_trial(record: RunRecord, generation, offspring, parent, successes, n_r=None) -> RunRecord:
    """Append ``(generation, ||offspring - parent||, successes)`` to the step log."""
    if successes < 0 or (n_r is not None and successes > n_r):
        raise ValueError(f"success count {successes} outside 0..{n_r}")
    length = float(np.linalg.norm(np.asarray(offspring, dtype=float) - np.asarray(parent, dtype=float)))
    record.step_log.append((int(generation), length, int(successes)))
    return record
