"""SVD-based pseudoinverse and minimum-norm least-squares solves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrixError, ShapeError

__all__ = ["SolveResult", "as_matrix", "default_tolerance", "pseudoinverse", "min_norm_solve", "numerical_rank"]


@dataclass(frozen=True)
class SolveResult:
    solution: np.ndarray
    residual_inf: float
    norm_sq: float


def as_matrix(M) -> np.ndarray:
    """Return `M` as a finite float64 2-D array or raise InvalidMatrixError."""
    a = np.asarray(M, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidMatrixError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrixError("matrix contains NaN or Inf entries")
    return a


def default_tolerance(shape, s_max: float) -> float:
    return max(shape) * np.finfo(np.float64).eps * s_max


def _svd(a, tol):
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    s_max = s[0] if s.size else 0.0
    cutoff = tol if tol > 0 else default_tolerance(a.shape, s_max)
    keep = s > cutoff
    return u, s, vh, keep


def pseudoinverse(M, tol: float = 0.0) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a real matrix.

    Parameters
    ----------
    M : array_like, shape (m, n)
        Finite real matrix.
    tol : float
        Singular values ``<= tol`` are treated as zero. ``0`` selects the
        default ``max(m, n) * eps * s_max``.

    Returns
    -------
    ndarray, shape (n, m)
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    a = as_matrix(M)
    u, s, vh, keep = _svd(a, tol)
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (vh.T * s_inv) @ u.T


def numerical_rank(M, tol: float = 0.0) -> int:
    a = as_matrix(M)
    return int(np.count_nonzero(_svd(a, tol)[3]))


def min_norm_solve(A, b, tol: float = 0.0) -> SolveResult:
    """Minimum-Euclidean-norm least-squares solution ``x = A^+ b``.

    The max-norm residual ``|A x - b|_inf`` is reported rather than
    checked, so callers decide what counts as an inconsistent system.
    """
    a = as_matrix(A)
    rhs = np.asarray(b, dtype=np.float64)
    if rhs.ndim != 1 or rhs.shape[0] != a.shape[0]:
        raise ShapeError(f"right-hand side of shape {rhs.shape} does not match {a.shape[0]} rows")
    if not np.all(np.isfinite(rhs)):
        raise InvalidMatrixError("right-hand side contains NaN or Inf entries")
    x = pseudoinverse(a, tol) @ rhs
    residual = float(np.max(np.abs(a @ x - rhs)))
    return SolveResult(solution=x, residual_inf=residual, norm_sq=float(x @ x))
