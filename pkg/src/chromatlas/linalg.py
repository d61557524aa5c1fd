"""Cyclic Jacobi eigensolver for small dense symmetric matrices."""

from __future__ import annotations

import numpy as np


class ConvergenceError(RuntimeError):
    pass


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Returns ``(values, vectors)`` with values sorted in non-increasing order
    and ``vectors[:, j]`` the unit eigenvector for ``values[j]``. Rotations
    are skipped for off-diagonal entries below ``tol`` times the Frobenius
    norm; the sweep order is fixed, so results are bit-reproducible.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ValueError("matrix is not symmetric")
    p = a.shape[0]
    v = np.eye(p)
    if p < 2:
        return _sorted(a[None], v[None])[0][0], v
    threshold = tol * np.sqrt((a * a).sum())
    skip = threshold * 1e-3
    iu = np.triu_indices(p, 1)
    for _ in range(max_sweeps):
        off = np.sqrt((a[iu] ** 2).sum())
        if not off > threshold:
            break
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = a[i, j]
                if not abs(aij) > skip:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * aij)
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ai = a[:, i].copy()
                aj = a[:, j].copy()
                a[:, i] = c * ai - s * aj
                a[:, j] = s * ai + c * aj
                ai = a[i, :].copy()
                aj = a[j, :].copy()
                a[i, :] = c * ai - s * aj
                a[j, :] = s * ai + c * aj
                a[i, j] = a[j, i] = 0.0
                vi = v[:, i].copy()
                vj = v[:, j].copy()
                v[:, i] = c * vi - s * vj
                v[:, j] = s * vi + c * vj
    else:
        off = np.sqrt((a[iu] ** 2).sum())
        if off > threshold:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})"
            )
    values, vectors = _sorted(a[None], v[None])
    return values[0], vectors[0]


def jacobi_eigh_batch(stack, tol: float = 1e-12, max_sweeps: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Same algorithm applied independently to each matrix of a ``(B, p, p)`` stack.

    Every operation is elementwise across the stack and a matrix stops
    rotating once its own off-diagonal norm is below threshold, so each
    result matches :func:`jacobi_eigh` on that matrix alone.
    """
    a = np.array(stack, dtype=float)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("expected a stack of square matrices")
    b, p, _ = a.shape
    for k in range(b):
        m = a[k]
        if not np.allclose(m, m.T, rtol=0, atol=1e-12 * max(1.0, np.abs(m).max(initial=0.0))):
            raise ValueError(f"matrix {k} is not symmetric")
    v = np.broadcast_to(np.eye(p), (b, p, p)).copy()
    if b == 0 or p < 2:
        return _sorted(a, v)
    threshold = tol * np.sqrt((a * a).sum(axis=(1, 2)))
    skip = threshold * 1e-3
    iu = np.triu_indices(p, 1)
    active = np.ones(b, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt((a[:, iu[0], iu[1]] ** 2).sum(axis=1))
        active &= off > threshold
        if not active.any():
            return _sorted(a, v)
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = a[:, i, j]
                rot = active & (np.abs(aij) > skip)
                if not rot.any():
                    continue
                full = bool(rot.all())
                idx = slice(None) if full else np.flatnonzero(rot)
                x = aij[idx]
                theta = (a[idx, j, j] - a[idx, i, i]) / (2.0 * x)
                t = np.copysign(1.0, theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                c = (1.0 / np.sqrt(t * t + 1.0))[:, None]
                s = t[:, None] * c
                sub = a[idx]
                ai = sub[:, :, i].copy()
                aj = sub[:, :, j].copy()
                sub[:, :, i] = c * ai - s * aj
                sub[:, :, j] = s * ai + c * aj
                ai = sub[:, i, :].copy()
                aj = sub[:, j, :].copy()
                sub[:, i, :] = c * ai - s * aj
                sub[:, j, :] = s * ai + c * aj
                sub[:, i, j] = 0.0
                sub[:, j, i] = 0.0
                if not full:
                    a[idx] = sub
                vs = v[idx]
                vi = vs[:, :, i].copy()
                vj = vs[:, :, j].copy()
                vs[:, :, i] = c * vi - s * vj
                vs[:, :, j] = s * vi + c * vj
                if not full:
                    v[idx] = vs
    off = np.sqrt((a[:, iu[0], iu[1]] ** 2).sum(axis=1))
    bad = np.flatnonzero(off > threshold)
    if len(bad):
        k = int(bad[0])
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (matrix {k}, off-diagonal norm {off[k]:.3e})"
        )
    return _sorted(a, v)


def _sorted(a: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b, p, _ = a.shape
    values = np.empty((b, p))
    vectors = np.empty_like(v)
    for k in range(b):
        d = np.diag(a[k]).copy()
        order = sorted(range(p), key=lambda r: (-d[r], r))
        values[k] = d[order]
        vectors[k] = v[k][:, order]
    return values, vectors
