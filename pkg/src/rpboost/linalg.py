"""Dense matrix helpers for the closed-form ridge solutions.

Matrices and vectors are plain float64 numpy arrays. Instance weights are
kept as a length-N vector and applied by row scaling; the N x N diagonal
weight matrix is never formed.
"""

import numpy as np
from scipy import linalg as sla

from .errors import ShapeError, SingularSystemError

__all__ = ["as_matrix", "as_vector", "matmul", "gram_weighted", "add_ridge", "solve_spd"]


def as_matrix(a, name="matrix"):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {a.shape}")
    return a


def as_vector(v, name="vector"):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got shape {v.shape}")
    return v


def matmul(a, b):
    """Matrix product with a shape check that names both operands."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def gram_weighted(z, w=None):
    """Return ``sum_i w_i z_i z_i^T``, i.e. ``Z^T W Z``.

    The upper triangle is computed and mirrored so the result is exactly
    symmetric. ``w=None`` means unit weights.
    """
    z = as_matrix(z, "z")
    if w is None:
        g = z.T @ z
    else:
        w = as_vector(w, "w")
        if w.shape[0] != z.shape[0]:
            raise ShapeError(f"weight length {w.shape[0]} does not match {z.shape[0]} rows")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        g = (z * w[:, None]).T @ z
    iu = np.triu_indices_from(g, k=1)
    g.T[iu] = g[iu]
    return g


def add_ridge(a, lam):
    """Copy of square ``a`` with ``lam`` added to every diagonal entry."""
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"ridge needs a square matrix, got {a.shape[0]}x{a.shape[1]}")
    if lam < 0:
        raise ValueError(f"ridge parameter must be >= 0, got {lam}")
    out = a.copy()
    out[np.diag_indices_from(out)] += lam
    return out


def _check_symmetric(a, rtol=1e-12):
    if np.array_equal(a, a.T):
        return
    scale = np.max(np.abs(a))
    if np.max(np.abs(a - a.T)) > rtol * max(scale, 1.0):
        raise ValueError("matrix is not symmetric")


def solve_spd(a, rhs, overwrite_a=False):
    """Solve ``a x = rhs`` for symmetric positive definite ``a`` by Cholesky.

    Raises SingularSystemError when a non-positive pivot shows up; choosing a
    larger ridge is left to the caller.
    """
    a = as_matrix(a, "a")
    rhs = as_vector(rhs, "rhs")
    n = a.shape[0]
    if a.shape[1] != n:
        raise ShapeError(f"system matrix must be square, got {a.shape[0]}x{a.shape[1]}")
    if rhs.shape[0] != n:
        raise ShapeError(f"rhs length {rhs.shape[0]} does not match {n}x{n} system")
    _check_symmetric(a)
    try:
        factor = sla.cho_factor(a, lower=True, overwrite_a=overwrite_a, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"system is singular or indefinite ({exc})") from exc
    return sla.cho_solve(factor, rhs, check_finite=False)
