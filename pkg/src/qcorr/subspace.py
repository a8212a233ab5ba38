"""Numerical subspaces of C^n.

A subspace is stored as a matrix whose columns are an orthonormal basis.
Rank is decided by singular value thresholding at ``tol * max(sigma_max, 1)``:
vectors here are coefficient vectors of order one, so anything below ``tol``
in absolute terms is rounding noise.  Membership and equality are reported
together with their residuals so the callers can surface them.
"""
import numpy as np

from .config import get_tol


def _as_columns(vectors, dim=None):
    v = np.asarray(vectors, dtype=complex)
    if v.ndim == 1:
        v = v.reshape(-1, 1)
    if v.size == 0:
        n = dim if dim is not None else (v.shape[0] if v.ndim == 2 else 0)
        return np.zeros((n, 0), dtype=complex)
    return v


def orth(vectors, tol=None, dim=None):
    """Orthonormal basis (as columns) of the span of the columns of ``vectors``."""
    tol = get_tol(tol)
    v = _as_columns(vectors, dim)
    if v.shape[1] == 0:
        return v
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0] if s.size else 0.0, 1.0)))
    return u[:, :rank]


def rank(vectors, tol=None):
    return orth(vectors, tol).shape[1]


def null_space(matrix, tol=None):
    """Orthonormal basis of ``{x : matrix @ x = 0}``.

    Singular values below ``tol * max(sigma_max, 1)`` count as zero: the
    systems solved here have entries of order one, so a matrix that is zero
    up to rounding has the whole space as kernel.
    """
    tol = get_tol(tol)
    a = np.asarray(matrix, dtype=complex)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    r = int(np.sum(s > tol * max(s[0] if s.size else 0.0, 1.0)))
    return vh[r:].conj().T


def distance(basis, v):
    """Euclidean distance from ``v`` to the span of the orthonormal columns of ``basis``."""
    v = np.asarray(v, dtype=complex)
    if basis.shape[1] == 0:
        return float(np.linalg.norm(v))
    return float(np.linalg.norm(v - basis @ (basis.conj().T @ v)))


def subspace_membership(space, v, tol=None, orthonormal=False):
    """Is ``v`` in the span of the columns of ``space``?

    Returns ``(member, residual)`` where the residual is the distance to the
    span and membership means ``residual <= tol * (1 + |v|)``.
    """
    tol = get_tol(tol)
    basis = space if orthonormal else orth(space, tol)
    res = distance(basis, v)
    return res <= tol * (1.0 + np.linalg.norm(v)), res


def max_distance(basis, vectors):
    """Largest distance from any column of ``vectors`` to span(basis)."""
    vectors = _as_columns(vectors, basis.shape[0])
    if vectors.shape[1] == 0:
        return 0.0
    if basis.shape[1] == 0:
        return float(np.linalg.norm(vectors, axis=0).max())
    r = vectors - basis @ (basis.conj().T @ vectors)
    return float(np.linalg.norm(r, axis=0).max())


def subspace_equal(a, b, tol=None):
    """Mutual membership of two orthonormal bases, as ``(equal, residual)``."""
    tol = get_tol(tol)
    if a.shape[1] != b.shape[1]:
        return False, float("inf")
    res = max(max_distance(a, b), max_distance(b, a))
    return res <= tol, res


def projector(basis):
    return basis @ basis.conj().T


def complement(basis, dim=None):
    """Orthonormal basis of the orthogonal complement."""
    n = basis.shape[0] if dim is None else dim
    if basis.shape[1] == 0:
        return np.eye(n, dtype=complex)
    q, _ = np.linalg.qr(basis, mode="complete")
    return q[:, basis.shape[1]:]


def coordinates(basis, vectors, tol=None):
    """Least squares coordinates of ``vectors`` in ``basis`` plus the fit residual."""
    vectors = np.asarray(vectors, dtype=complex)
    coef, *_ = np.linalg.lstsq(basis, vectors, rcond=None)
    res = float(np.abs(basis @ coef - vectors).max()) if vectors.size else 0.0
    return coef, res


def pivot_columns(vectors, tol=None):
    """Indices of a greedy maximal linearly independent subset of columns."""
    tol = get_tol(tol)
    v = _as_columns(vectors)
    chosen = []
    basis = np.zeros((v.shape[0], 0), dtype=complex)
    scale = max(np.linalg.norm(v, axis=0).max(initial=0.0), 1.0)
    for j in range(v.shape[1]):
        col = v[:, j]
        r = col - basis @ (basis.conj().T @ col)
        nr = np.linalg.norm(r)
        if nr > tol * scale:
            chosen.append(j)
            basis = np.column_stack([basis, r / nr])
    return chosen
