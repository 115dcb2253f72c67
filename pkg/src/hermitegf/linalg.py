"""Dense linear-algebra kernels.

Thin, deterministic wrappers around LAPACK: Householder QR with a fixed sign
convention, row-pivoted LU solves (left and right), triangular back
substitution and SVD condition numbers.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla

from hermitegf.errors import SingularMatrix

PIVOT_FLOOR = 1e-300


class QRResult(NamedTuple):
    Q: np.ndarray
    R: np.ndarray
    full_rank: bool


def qr_thin(A) -> QRResult:
    """Thin Householder QR of a tall matrix with ``diag(R) >= 0``.

    Parameters
    ----------
    A : array_like, shape (m, n), m >= n

    Returns
    -------
    QRResult
        ``Q`` (m, n) with orthonormal columns, upper-triangular ``R`` (n, n)
        and ``full_rank``, False when some ``|R_ii| < 1e-300``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("qr_thin expects a 2-D array")
    m, n = A.shape
    if m < n:
        raise ValueError(f"qr_thin needs m >= n, got {m}x{n}")
    Q, R = np.linalg.qr(A, mode="reduced")
    signs = np.where(np.diag(R) < 0.0, -1.0, 1.0)
    Q = Q * signs
    R = R * signs[:, None]
    full_rank = bool(np.all(np.abs(np.diag(R)) >= PIVOT_FLOOR))
    return QRResult(Q, R, full_rank)


def _lu(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=True)
    pivots = np.abs(np.diag(lu))
    bad = np.flatnonzero(pivots < PIVOT_FLOOR)
    if bad.size:
        raise SingularMatrix(
            f"pivot {bad[0]} has magnitude {pivots[bad[0]]:.3e} < {PIVOT_FLOOR:g}",
            pivot_index=int(bad[0]),
        )
    return lu, piv


def lu_factor(A):
    """Row-pivoted LU factorization; raises :class:`SingularMatrix` on a tiny pivot."""
    return _lu(A)


def lu_solve(factors, B, trans=0):
    return sla.lu_solve(factors, np.asarray(B, dtype=float), trans=trans)


def solve(A, B) -> np.ndarray:
    """Solve ``A X = B`` by partially pivoted Gaussian elimination."""
    return sla.lu_solve(_lu(A), np.asarray(B, dtype=float))


def solve_right(B, A) -> np.ndarray:
    """Return ``B A^{-1}`` by solving ``A^T X^T = B^T``; the inverse is never formed."""
    B = np.asarray(B, dtype=float)
    vector = B.ndim == 1
    B2 = np.atleast_2d(B)
    factors = _lu(A)
    X = sla.lu_solve(factors, B2.T, trans=1).T
    return X[0] if vector else X


def upper_tri_solve_right(R1, R2) -> np.ndarray:
    """Return ``R1^{-1} R2`` for upper-triangular ``R1`` by back substitution."""
    R1 = np.asarray(R1, dtype=float)
    R2 = np.asarray(R2, dtype=float)
    diag = np.abs(np.diag(R1))
    bad = np.flatnonzero(diag < PIVOT_FLOOR)
    if bad.size:
        raise SingularMatrix(f"zero diagonal entry at {bad[0]} of triangular factor",
                             pivot_index=int(bad[0]))
    if R2.size == 0:
        return np.zeros(R2.shape)
    return sla.solve_triangular(R1, R2, lower=False)


def condition_number_2(A) -> float:
    """Spectral condition number from a full SVD; ``inf`` when sigma_min underflows."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 1.0
    if not np.all(np.isfinite(A)):
        return float("inf")
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= 0.0 or not np.isfinite(s[0] / s[-1]):
        return float("inf")
    return float(s[0] / s[-1])
