"""Front-quality indicators for (return, risk) archives.

Points are ``(m, 2)`` arrays in canonical orientation (return maximized, risk
minimized) and raw objective units; nothing is normalized. GD, S, Delta and
IGD are lower-is-better, MS and HV higher-is-better.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "METRIC_NAMES",
    "LOWER_IS_BETTER",
    "FrontArchive",
    "dominates",
    "nondominated_mask",
    "nondominated_filter",
    "gd",
    "spacing",
    "maximum_spread",
    "delta_spread",
    "igd",
    "hypervolume",
    "nadir_reference",
    "all_metrics",
    "archive_to_csv",
    "archive_from_csv",
]

METRIC_NAMES = ("GD", "S", "MS", "Delta", "IGD", "HV")
LOWER_IS_BETTER = {"GD": True, "S": True, "MS": False, "Delta": True, "IGD": True, "HV": False}


@dataclass(frozen=True, eq=False)
class FrontArchive:
    points: np.ndarray
    provenance: str = field(default="")

    def __len__(self):
        return int(self.points.shape[0])


def _as_points(points) -> np.ndarray:
    if isinstance(points, FrontArchive):
        points = points.points
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        return P.reshape(0, 2)
    return np.atleast_2d(P)


def dominates(a, b) -> bool:
    """True if ``a`` dominates ``b`` under (maximize return, minimize risk)."""
    return (a[0] >= b[0] and a[1] <= b[1]) and (a[0] > b[0] or a[1] < b[1])


def nondominated_mask(points) -> np.ndarray:
    """Boolean mask of points no other point dominates (duplicates all survive)."""
    P = _as_points(points)
    m = P.shape[0]
    if m == 0:
        return np.zeros(0, dtype=bool)
    # sweep by return descending, risk ascending: a point survives iff its risk
    # is below every risk seen among points with strictly higher return, and it
    # is not beaten on risk by an equal-return point
    order = np.lexsort((P[:, 1], -P[:, 0]))
    mask = np.zeros(m, dtype=bool)
    best_risk = np.inf
    k = 0
    while k < m:
        ret = P[order[k], 0]
        end = k
        while end < m and P[order[end], 0] == ret:
            end += 1
        group = order[k:end]
        gmin = P[group[0], 1]
        if gmin < best_risk:
            mask[group[P[group, 1] == gmin]] = True
        best_risk = min(best_risk, gmin)
        k = end
    return mask


def nondominated_filter(points, provenance="") -> FrontArchive:
    """Maximal non-dominated subset with duplicate points collapsed.

    Output rows are sorted by return ascending.
    """
    P = _as_points(points)
    if P.shape[0] == 0:
        return FrontArchive(P, provenance)
    nd = np.unique(P[nondominated_mask(P)], axis=0)
    return FrontArchive(nd, provenance)


def _min_dist(src, dst) -> np.ndarray:
    """For every row of ``src``, the Euclidean distance to the closest row of ``dst``."""
    out = np.empty(src.shape[0])
    step = max(1, 4_000_000 // max(1, dst.shape[0]))
    for s in range(0, src.shape[0], step):
        d = src[s : s + step, None, :] - dst[None, :, :]
        out[s : s + step] = np.sqrt((d * d).sum(axis=-1)).min(axis=1)
    return out


def gd(archive, frontier) -> float:
    """Generational distance: mean distance from archive points to the frontier."""
    A = _as_points(archive)
    P = _as_points(getattr(frontier, "points", frontier))
    if A.shape[0] == 0:
        raise ValueError("empty archive")
    return float(_min_dist(A, P).mean())


def igd(archive, frontier) -> float:
    """Inverted generational distance: mean distance from frontier points to the archive."""
    A = _as_points(archive)
    P = _as_points(getattr(frontier, "points", frontier))
    if A.shape[0] == 0:
        raise ValueError("empty archive")
    return float(_min_dist(P, A).mean())


def spacing(archive) -> float:
    """Spread of nearest-neighbour Manhattan distances (Schott's S, L1 form)."""
    A = _as_points(archive)
    if A.shape[0] < 2:
        raise ValueError("spacing needs at least two points")
    D = np.abs(A[:, None, :] - A[None, :, :]).sum(axis=-1)
    np.fill_diagonal(D, np.inf)
    d = D.min(axis=1)
    return float(np.sqrt(np.mean((d.mean() - d) ** 2)))


def maximum_spread(archive) -> float:
    """Diagonal of the archive's bounding box."""
    A = _as_points(archive)
    if A.shape[0] == 0:
        raise ValueError("empty archive")
    ext = A.max(axis=0) - A.min(axis=0)
    return float(np.sqrt((ext * ext).sum()))


def delta_spread(archive, frontier) -> float:
    """Deb's spread Delta.

    The archive is sorted by return; ``d_f`` and ``d_l`` are the distances from
    the frontier's lowest- and highest-return points to the archive's
    lowest- and highest-return points. Returns 0 when the denominator vanishes
    (archive collapsed onto a single-point frontier).
    """
    A = _as_points(archive)
    if A.shape[0] < 2:
        raise ValueError("spread needs at least two points")
    A = A[np.lexsort((A[:, 1], A[:, 0]))]
    P = _as_points(getattr(frontier, "points", frontier))
    P = P[np.lexsort((P[:, 1], P[:, 0]))]
    d_f = float(np.linalg.norm(P[0] - A[0]))
    d_l = float(np.linalg.norm(P[-1] - A[-1]))
    gaps = np.linalg.norm(np.diff(A, axis=0), axis=1)
    dbar = gaps.mean()
    den = d_f + d_l + (A.shape[0] - 1) * dbar
    if den == 0.0:
        return 0.0
    return float((d_f + d_l + np.abs(gaps - dbar).sum()) / den)


def hypervolume(archive, ref) -> float:
    """Area dominated by the archive and bounded by ``ref = (return, risk)``.

    A point contributes the rectangle ``[ref_ret, ret] x [risk, ref_risk]``;
    points with return below ``ref_ret`` or risk above ``ref_risk`` add
    nothing.
    """
    A = _as_points(archive)
    ref_ret, ref_risk = float(ref[0]), float(ref[1])
    A = A[(A[:, 0] > ref_ret) & (A[:, 1] < ref_risk)]
    if A.shape[0] == 0:
        return 0.0
    A = A[np.lexsort((A[:, 1], -A[:, 0]))]
    area = 0.0
    best_risk = np.inf
    for k in range(A.shape[0]):
        best_risk = min(best_risk, A[k, 1])
        next_ret = A[k + 1, 0] if k + 1 < A.shape[0] else ref_ret
        area += (A[k, 0] - next_ret) * (ref_risk - best_risk)
    return float(area)


def nadir_reference(fronts):
    """Worst return and worst risk over a collection of fronts."""
    pts = np.vstack([_as_points(f) for f in fronts])
    return float(pts[:, 0].min()), float(pts[:, 1].max())


def all_metrics(points, frontier, hv_ref=None) -> dict:
    """The six indicators on the non-dominated subset of ``points``.

    Indicators that are undefined for the archive (S and Delta with fewer
    than two points, HV without a reference) are NaN.
    """
    A = nondominated_filter(points).points
    P = getattr(frontier, "points", frontier)
    out = {
        "GD": gd(A, P),
        "S": spacing(A) if A.shape[0] >= 2 else float("nan"),
        "MS": maximum_spread(A),
        "Delta": delta_spread(A, P) if A.shape[0] >= 2 else float("nan"),
        "IGD": igd(A, P),
        "HV": hypervolume(A, hv_ref) if hv_ref is not None else float("nan"),
    }
    return out


def archive_to_csv(points) -> str:
    """CSV with header ``return,risk`` and 12 significant digits."""
    buf = io.StringIO()
    buf.write("return,risk\n")
    for r, v in _as_points(points):
        buf.write(f"{r:.12g},{v:.12g}\n")
    return buf.getvalue()


def archive_from_csv(text) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["return", "risk"]:
        raise ValueError("archive CSV must start with the header 'return,risk'")
    pts = [(float(a), float(b)) for a, b in rows[1:] if a.strip()]
    return np.array(pts, dtype=float).reshape(-1, 2)
