"""Coefficient point clouds and principal component analysis.

The point cloud holds absolute chromatic coefficients per graph. It is
log-transformed with ``ln(1 + x)`` and min-max scaled per feature before
PCA. PCA uses the sample covariance (divisor ``N - 1``) and the in-house
Jacobi eigensolver, so no external decomposition routine is involved.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .linalg import jacobi_eigh

BLOCK_ROWS = 8192


@dataclass
class PointCloud:
    rows: np.ndarray
    row_ids: list[str]
    feature_labels: list[str]
    normalization_log: list[dict] = field(default_factory=list)
    orders: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.rows.ndim != 2:
            raise ValueError("point cloud rows must form a 2-D array")
        if len(self.row_ids) != self.rows.shape[0]:
            raise ValueError("row count does not match id count")
        if len(self.feature_labels) != self.rows.shape[1]:
            raise ValueError("feature count does not match label count")

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape


@dataclass
class PcaResult:
    eigenvalues: np.ndarray
    loadings: np.ndarray  # column j is the j-th loading vector
    nev: np.ndarray
    cev: np.ndarray
    mean: np.ndarray
    feature_labels: list[str]


def build_point_cloud(records: Iterable, mode: str = "fixed", length: int = 10) -> PointCloud:
    """Stack coefficient vectors of ``records`` (objects with ``graph6``, ``n``, ``q``).

    ``fixed`` mode needs a single order ``n`` and keeps the ``n - 1``
    non-constant slots ``|c_{n-1}|, ..., |c_1|``; ``mixed`` keeps all
    ``length`` padded slots.
    """
    if mode not in ("fixed", "mixed"):
        raise ValueError(f"unknown point cloud mode {mode!r}")
    ids: list[str] = []
    vecs: list[Sequence[int]] = []
    orders: list[int] = []
    for rec in records:
        ids.append(rec.graph6)
        vecs.append(tuple(rec.q))
        orders.append(rec.n)
    if not ids:
        raise ValueError("cannot build a point cloud from no records")
    if mode == "fixed":
        n = orders[0]
        if any(o != n for o in orders):
            raise ValueError(f"fixed-order cloud needs one order, got {sorted(set(orders))}")
        if length < n:
            raise ValueError(f"length {length} is shorter than order {n}")
        rows = np.array([v[1:n] for v in vecs], dtype=float).reshape(len(ids), n - 1)
        labels = [f"c{n - i}" for i in range(1, n)]
    else:
        if max(orders) > length:
            raise ValueError(f"length {length} is shorter than order {max(orders)}")
        rows = np.array([tuple(v[:length]) + (0,) * (length - len(v)) for v in vecs], dtype=float)
        labels = [f"q{i}" for i in range(length)]
    return PointCloud(rows, ids, labels, [], np.array(orders))


def log_minmax_normalize(pc: PointCloud, groups: Optional[Sequence] = None) -> PointCloud:
    """``x -> ln(1 + x)`` then per-feature ``(v - min) / (max - min)``.

    Constant features map to 0. With ``groups`` the min-max step runs
    separately inside each group label (e.g. per order in a mixed cloud).
    """
    if (pc.rows < 0).any():
        raise ValueError("log normalisation needs non-negative features")
    logged = np.log1p(pc.rows)
    out = np.zeros_like(logged)
    log: list[dict] = []
    if groups is None:
        masks = [("all", np.ones(len(logged), dtype=bool))]
    else:
        labels = np.asarray(groups)
        masks = [(str(key), labels == key) for key in sorted(set(labels.tolist()))]
    for gname, mask in masks:
        block = logged[mask]
        lo = block.min(axis=0)
        hi = block.max(axis=0)
        span = hi - lo
        scaled = np.zeros_like(block)
        live = span > 0
        scaled[:, live] = (block[:, live] - lo[live]) / span[live]
        out[mask] = scaled
        for j, label in enumerate(pc.feature_labels):
            log.append({"group": gname, "feature": label, "transform": "log1p",
                        "min": float(lo[j]), "max": float(hi[j])})
    return replace(pc, rows=out, normalization_log=log)


def _fixed_order_covariance(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and sample covariance with block-sequential accumulation."""
    n, p = x.shape
    total = np.zeros(p)
    for start in range(0, n, BLOCK_ROWS):
        total += x[start:start + BLOCK_ROWS].sum(axis=0)
    mean = total / n
    cov = np.zeros((p, p))
    for start in range(0, n, BLOCK_ROWS):
        block = x[start:start + BLOCK_ROWS] - mean
        cov += np.einsum("ij,ik->jk", block, block, optimize=False)
    return mean, cov / (n - 1)


def pca(pc: PointCloud, max_sweeps: int = 64) -> PcaResult:
    x = pc.rows
    if x.shape[0] < 2:
        raise ValueError("PCA needs at least two rows")
    mean, cov = _fixed_order_covariance(x)
    values, vectors = jacobi_eigh(cov, tol=1e-12, max_sweeps=max_sweeps)
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        k = int(np.argmax(np.abs(col)))
        if col[k] < 0:
            vectors[:, j] = -col
    total = values.sum()
    if total > 0:
        nev = values / total
    else:
        nev = np.zeros_like(values)
    cev = np.cumsum(nev)
    return PcaResult(values, vectors, nev, cev, mean, list(pc.feature_labels))


def project(pc: PointCloud, res: PcaResult, k: int) -> np.ndarray:
    """PC scores: centred rows times the first ``k`` loading vectors."""
    p = res.loadings.shape[0]
    if not 1 <= k <= p:
        raise ValueError(f"k must lie in 1..{p}, got {k}")
    return (pc.rows - res.mean) @ res.loadings[:, :k]


# CSV export


def write_variance_csv(res: PcaResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["component", "eigenvalue", "nev", "cev"])
        for j, (lam, a, s) in enumerate(zip(res.eigenvalues, res.nev, res.cev), start=1):
            w.writerow([f"PC{j}", f"{lam:.17g}", f"{a:.17g}", f"{s:.17g}"])


def write_loadings_csv(res: PcaResult, path, k: Optional[int] = None) -> None:
    k = res.loadings.shape[1] if k is None else k
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["component", *res.feature_labels])
        for j in range(k):
            w.writerow([f"PC{j + 1}", *(f"{x:.17g}" for x in res.loadings[:, j])])


def write_scores_csv(ids: Sequence[str], scores: np.ndarray, path, extra: Optional[dict] = None) -> None:
    extra = extra or {}
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["graph6", *(f"PC{j + 1}" for j in range(scores.shape[1])), *extra])
        for i, key in enumerate(ids):
            row = [key, *(f"{x:.17g}" for x in scores[i])]
            row += [_fmt(col[i]) for col in extra.values()]
            w.writerow(row)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)
