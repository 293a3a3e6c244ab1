"""OR-library portfolio benchmark ingestion.

The five OR-library mean-variance instances (``port1`` ... ``port5``) store,
per asset, a mean return and a standard deviation followed by the upper
triangle of the correlation matrix. The companion ``portef`` files hold the
unconstrained efficient frontier as ``mean_return variance`` pairs.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "AssetUniverse",
    "ReferenceFrontier",
    "DatasetFormatError",
    "DATASETS",
    "parse_universe",
    "parse_frontier",
    "format_universe",
    "format_frontier",
    "universe_to_json",
    "load_universe",
    "load_frontier",
    "resolve_dataset",
    "synthetic_universe",
    "efficient_frontier",
]


class DatasetFormatError(ValueError):
    """Raised when a portfolio or frontier file does not follow the OR-library layout."""


# name -> (file index, asset count); sizes as published with the benchmark
DATASETS = {
    "hangseng": (1, 31),
    "dax100": (2, 85),
    "ftse100": (3, 89),
    "sp100": (4, 98),
    "nikkei": (5, 225),
}


@dataclass(frozen=True, eq=False)
class AssetUniverse:
    """Expected returns and covariance for ``n`` assets.

    ``correlation`` is kept next to ``covariance`` so a universe can be written
    back in its source layout without loss.
    """

    mean_returns: np.ndarray
    stddevs: np.ndarray
    correlation: np.ndarray
    covariance: np.ndarray
    name: str = ""

    @property
    def n(self) -> int:
        return int(self.mean_returns.shape[0])

    def __post_init__(self):
        for arr in (self.mean_returns, self.stddevs, self.correlation, self.covariance):
            arr.setflags(write=False)

    @classmethod
    def from_correlation(cls, mean_returns, stddevs, correlation, name=""):
        mean_returns = np.array(mean_returns, dtype=float)
        stddevs = np.array(stddevs, dtype=float)
        correlation = np.array(correlation, dtype=float)
        covariance = correlation * np.outer(stddevs, stddevs)
        return cls(mean_returns, stddevs, correlation, covariance, name)


@dataclass(frozen=True, eq=False)
class ReferenceFrontier:
    """Known efficient frontier as an ``(m, 2)`` array of ``(return, risk)``.

    ``dominated`` lists indices of points found to be dominated by another
    point of the same file. They are kept, only recorded.
    """

    points: np.ndarray
    dominated: tuple = field(default=())

    def __post_init__(self):
        self.points.setflags(write=False)

    def __len__(self):
        return int(self.points.shape[0])

    @property
    def extremes(self):
        """The lowest-return and highest-return frontier points."""
        order = np.lexsort((self.points[:, 1], self.points[:, 0]))
        return self.points[order[0]], self.points[order[-1]]


def _read_text(text):
    if hasattr(text, "read"):
        text = text.read()
    return text


def _parse_float(token, lineno):
    try:
        return float(token)
    except ValueError:
        raise DatasetFormatError(f"line {lineno}: cannot parse {token!r} as a number") from None


def parse_universe(text, name="") -> AssetUniverse:
    """Parse an OR-library portfolio file into an :class:`AssetUniverse`.

    Parameters
    ----------
    text : str or file-like
        Line 1 is the asset count ``n``; the next ``n`` lines are
        ``mean_return stddev``; the remaining lines are ``i j correlation``
        with 1-based indices covering every pair ``i <= j``.
    name : str, optional
        Label stored on the result.

    Raises
    ------
    DatasetFormatError
        On malformed lines, a count mismatch, a missing or out-of-range
        correlation, or a non-positive standard deviation.
    """
    lines = [(k + 1, ln.split()) for k, ln in enumerate(_read_text(text).splitlines())]
    lines = [(k, toks) for k, toks in lines if toks]
    if not lines:
        raise DatasetFormatError("empty portfolio file")

    lineno, toks = lines[0]
    if len(toks) != 1:
        raise DatasetFormatError(f"line {lineno}: expected the asset count alone")
    try:
        n = int(toks[0])
    except ValueError:
        raise DatasetFormatError(f"line {lineno}: asset count {toks[0]!r} is not an integer") from None
    if n < 1:
        raise DatasetFormatError(f"line {lineno}: asset count must be positive, got {n}")
    if len(lines) < 1 + n:
        raise DatasetFormatError(f"asset count mismatch: header says {n}, found {len(lines) - 1} data lines")

    mean = np.empty(n)
    std = np.empty(n)
    for a, (lineno, toks) in enumerate(lines[1 : n + 1]):
        if len(toks) != 2:
            raise DatasetFormatError(f"line {lineno}: expected 'mean_return stddev', got {len(toks)} fields")
        mean[a] = _parse_float(toks[0], lineno)
        std[a] = _parse_float(toks[1], lineno)
        if not std[a] > 0:
            raise DatasetFormatError(f"line {lineno}: standard deviation must be positive, got {std[a]}")

    corr = np.full((n, n), np.nan)
    for lineno, toks in lines[n + 1 :]:
        if len(toks) != 3:
            raise DatasetFormatError(f"line {lineno}: expected 'i j correlation', got {len(toks)} fields")
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError:
            raise DatasetFormatError(f"line {lineno}: asset indices must be integers") from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise DatasetFormatError(f"line {lineno}: asset index out of range 1..{n}")
        rho = _parse_float(toks[2], lineno)
        if not -1.0 <= rho <= 1.0:
            raise DatasetFormatError(f"line {lineno}: correlation {rho} outside [-1, 1]")
        corr[i - 1, j - 1] = rho
        corr[j - 1, i - 1] = rho

    missing = [(i, j) for i, j in np.argwhere(np.isnan(corr)) if i <= j]
    if missing:
        i, j = missing[0]
        raise DatasetFormatError(f"missing correlation for pair ({i + 1}, {j + 1}); {len(missing)} pairs absent")

    return AssetUniverse.from_correlation(mean, std, corr, name=name)


def parse_frontier(text) -> ReferenceFrontier:
    """Parse a frontier file of ``mean_return variance`` lines.

    File order is preserved. Points dominated by another point (higher or
    equal return with lower or equal variance, one strictly) are listed in
    ``ReferenceFrontier.dominated`` and a :class:`UserWarning` is issued.
    """
    rows = []
    for k, ln in enumerate(_read_text(text).splitlines()):
        toks = ln.split()
        if not toks:
            continue
        if len(toks) != 2:
            raise DatasetFormatError(f"line {k + 1}: expected 'mean_return variance', got {len(toks)} fields")
        rows.append((_parse_float(toks[0], k + 1), _parse_float(toks[1], k + 1)))
    if not rows:
        raise DatasetFormatError("empty frontier file")

    pts = np.array(rows, dtype=float)
    ret, risk = pts[:, 0], pts[:, 1]
    weak = (ret[None, :] >= ret[:, None]) & (risk[None, :] <= risk[:, None])
    strict = (ret[None, :] > ret[:, None]) | (risk[None, :] < risk[:, None])
    dominated = tuple(int(i) for i in np.flatnonzero((weak & strict).any(axis=1)))
    if dominated:
        warnings.warn(f"{len(dominated)} frontier point(s) are dominated: {list(dominated[:10])}", stacklevel=2)
    return ReferenceFrontier(pts, dominated)


def format_universe(universe: AssetUniverse) -> str:
    """Write a universe in the OR-library layout; ``repr`` floats round-trip exactly."""
    out = [f"{universe.n}"]
    out += [f"{m!r} {s!r}" for m, s in zip(universe.mean_returns.tolist(), universe.stddevs.tolist())]
    corr = universe.correlation
    for i in range(universe.n):
        for j in range(i, universe.n):
            out.append(f"{i + 1} {j + 1} {float(corr[i, j])!r}")
    return "\n".join(out) + "\n"


def format_frontier(points) -> str:
    return "".join(f"{float(r)!r} {float(v)!r}\n" for r, v in np.asarray(points, dtype=float))


def universe_to_json(universe: AssetUniverse) -> str:
    """Canonical JSON dump (sorted keys, shortest round-trip floats)."""
    doc = {
        "name": universe.name,
        "n": universe.n,
        "mean_returns": universe.mean_returns.tolist(),
        "stddevs": universe.stddevs.tolist(),
        "covariance": universe.covariance.tolist(),
    }
    return json.dumps(doc, sort_keys=True, indent=1)


def _existing(path: Path):
    for cand in (path, path.with_suffix(".txt")):
        if cand.is_file():
            return cand
    return None


def load_universe(path, name=None) -> AssetUniverse:
    path = Path(path)
    return parse_universe(path.read_text(), name=name if name is not None else path.stem)


def load_frontier(path) -> ReferenceFrontier:
    return parse_frontier(Path(path).read_text())


def resolve_dataset(name, data_dir=None):
    """Locate ``(universe_path, frontier_path)`` for a named OR-library dataset.

    ``data_dir`` defaults to ``$LEVYMOEAD_DATA_DIR`` and then ``./data/orlib``.
    Both ``port1`` and ``port1.txt`` spellings are accepted.

    Raises
    ------
    KeyError
        Unknown dataset name.
    FileNotFoundError
        The files are not present in ``data_dir``.
    """
    key = name.lower().replace("&", "").replace(" ", "").replace("-", "").replace("_", "")
    aliases = {"dax": "dax100", "ftse": "ftse100", "sp": "sp100", "sandp100": "sp100", "hang": "hangseng"}
    key = aliases.get(key, key)
    if key not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; expected one of {sorted(DATASETS)}")
    if data_dir is None:
        data_dir = os.environ.get("LEVYMOEAD_DATA_DIR", "data/orlib")
    data_dir = Path(data_dir)
    idx = DATASETS[key][0]
    uni = _existing(data_dir / f"port{idx}")
    front = _existing(data_dir / f"portef{idx}")
    if uni is None or front is None:
        raise FileNotFoundError(
            f"OR-library files port{idx}/portef{idx} for {key!r} not found in {data_dir.resolve()}"
        )
    return uni, front


def synthetic_universe(n, seed=0, n_factors=3, name=None) -> AssetUniverse:
    """Random universe with OR-library-like magnitudes from a factor model.

    Weekly-scale returns (around 1e-3) and volatilities (2e-2 to 6e-2) keep
    objective values in the same range as the benchmark files.
    """
    rng = np.random.default_rng(seed)
    loadings = rng.normal(0.0, 1.0, size=(n, n_factors)) * rng.uniform(0.3, 1.0, size=n_factors)
    idio = rng.uniform(0.3, 1.0, size=n)
    cov = loadings @ loadings.T + np.diag(idio)
    s = np.sqrt(np.diag(cov))
    corr = cov / np.outer(s, s)
    np.fill_diagonal(corr, 1.0)
    corr = np.clip(corr, -1.0, 1.0)
    stddevs = rng.uniform(0.02, 0.06, size=n)
    # returns loosely increase with volatility so the frontier has a real trade-off
    mean = -0.002 + 0.12 * stddevs + rng.normal(0.0, 0.0015, size=n)
    return AssetUniverse.from_correlation(mean, stddevs, corr, name=name or f"synthetic{n}")


def efficient_frontier(universe: AssetUniverse, n_points=200) -> ReferenceFrontier:
    """Long-only efficient frontier by solving one QP per target return.

    For each target ``t`` evenly spaced between the minimum-variance return
    and the largest asset return, minimizes ``w' S w`` subject to
    ``sum(w) = 1``, ``r' w = t`` and ``w >= 0``. Points come back in
    descending return order, like the ``portef`` files. Requires ``cvxopt``.
    """
    from cvxopt import matrix, solvers

    r = universe.mean_returns
    n = universe.n
    scale = float(np.trace(universe.covariance)) / n
    P = matrix(2.0 * universe.covariance / scale)
    q = matrix(np.zeros(n))
    G = matrix(-np.eye(n))
    h = matrix(np.zeros(n))
    opts = {"show_progress": False, "abstol": 1e-14, "reltol": 1e-12, "feastol": 1e-12, "maxiters": 200}

    def solve(A, b):
        sol = solvers.qp(P, q, G, h, matrix(A), matrix(b), options=opts)
        w = np.clip(np.array(sol["x"]).ravel(), 0.0, None)
        return w / w.sum()

    w_min = solve(np.ones((1, n)), np.ones(1))
    t_lo = float(r @ w_min)
    A = np.vstack([np.ones(n), r])
    pts = []
    for t in np.linspace(t_lo, float(r.max()), n_points):
        w = w_min if t == t_lo else solve(A, np.array([1.0, t]))
        pts.append((float(r @ w), float(w @ universe.covariance @ w)))
    pts = np.array(pts)[::-1]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        front = parse_frontier(format_frontier(pts))
    return front
