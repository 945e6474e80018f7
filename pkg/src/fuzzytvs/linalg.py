"""Gauss-Jordan elimination with partial pivoting.

Kept in-house so that rank decisions follow one documented rule: a pivot
counts when its magnitude exceeds ``RANK_TOL`` times the largest entry of
the input.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

RANK_TOL = 1e-9


def _threshold(A: np.ndarray) -> float:
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    return RANK_TOL * scale if scale > 0 else 0.0


def row_reduce(A, b=None):
    """Reduced row echelon form of ``[A | b]``.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot columns of the
    ``A`` part.  ``b`` may be a vector or a matrix of right-hand sides.
    """
    A = np.array(A, dtype=float, ndmin=2)
    m, n = A.shape
    if b is not None:
        b = np.asarray(b, dtype=float).reshape(m, -1)
        M = np.hstack([A, b])
    else:
        M = A.copy()
    thresh = _threshold(A)
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        k = row + int(np.argmax(np.abs(M[row:, col])))
        if abs(M[k, col]) <= thresh or M[k, col] == 0.0:
            M[row:, col] = 0.0
            continue
        if k != row:
            M[[row, k]] = M[[k, row]]
        M[row] /= M[row, col]
        others = np.arange(m) != row
        M[others] -= np.outer(M[others, col], M[row])
        M[others, col] = 0.0
        pivots.append(col)
        row += 1
    return M, pivots


def rank(A) -> int:
    A = np.array(A, dtype=float, ndmin=2)
    if A.size == 0:
        return 0
    return len(row_reduce(A)[1])


def solve(A, b) -> Optional[np.ndarray]:
    """A particular solution of ``A x = b`` (free variables set to 0), or None
    when the system is inconsistent."""
    A = np.array(A, dtype=float, ndmin=2)
    b = np.asarray(b, dtype=float).reshape(-1)
    m, n = A.shape
    if b.shape[0] != m:
        raise ValueError("right-hand side length does not match the matrix")
    M, pivots = row_reduce(A, b)
    rhs = M[:, n]
    r = len(pivots)
    slack = RANK_TOL * max(1.0, float(np.max(np.abs(b))) if b.size else 0.0)
    if r < m and np.any(np.abs(rhs[r:]) > slack):
        return None
    x = np.zeros(n)
    x[pivots] = rhs[:r]
    return x
