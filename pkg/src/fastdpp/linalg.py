"""Dense linear-algebra primitives used by the samplers.

Orthonormal bases are plain ``(n, m)`` float arrays with orthonormal
columns; :func:`check_orthonormal` validates one.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DegenerateResidual, NotSymmetric, RankDeficient

__all__ = [
    "SpectralDecomposition",
    "GramSchmidtBasis",
    "orthonormalize",
    "check_orthonormal",
    "eigendecompose_sym",
    "gram_schmidt_append",
    "randomized_range_finder",
    "read_matrix",
    "write_matrix",
]


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in descending order and matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T


def _as_matrix(A, name="matrix") -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf")
    return A


def check_orthonormal(Q, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Return ``Q`` as a float array, raising if ``Q^T Q`` is not the identity."""
    Q = _as_matrix(Q, "Q")
    n, m = Q.shape
    if m > n:
        raise ValueError(f"basis has more columns than rows ({n}x{m})")
    err = np.max(np.abs(Q.T @ Q - np.eye(m))) if m else 0.0
    if err > tol.orthonormal:
        raise ValueError(f"columns are not orthonormal (max |Q^T Q - I| = {err:.3g})")
    return Q


def orthonormalize(V, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Orthonormal basis of the column space of ``V`` via reduced QR.

    Raises
    ------
    RankDeficient
        If the smallest diagonal entry of R falls below
        ``tol.rank_ratio`` times the largest one.
    """
    V = _as_matrix(V, "V")
    n, p = V.shape
    if p > n:
        raise RankDeficient(f"{p} columns cannot be independent in R^{n}")
    if p == 0:
        return np.zeros((n, 0))
    Q, R = np.linalg.qr(V, mode="reduced")
    d = np.abs(np.diag(R))
    if d.max() == 0.0 or d.min() < tol.rank_ratio * d.max():
        raise RankDeficient("matrix is numerically rank deficient")
    return Q


def eigendecompose_sym(M, tol: Tolerances = DEFAULT_TOLERANCES) -> SpectralDecomposition:
    M = _as_matrix(M, "M")
    if M.shape[0] != M.shape[1]:
        raise NotSymmetric(f"matrix is not square: {M.shape}")
    asym = np.max(np.abs(M - M.T)) if M.size else 0.0
    if asym > tol.symmetric:
        raise NotSymmetric(f"max |M - M^T| = {asym:.3g}")
    w, U = np.linalg.eigh(0.5 * (M + M.T))
    return SpectralDecomposition(w[::-1].copy(), U[:, ::-1].copy())


class GramSchmidtBasis:
    """Growing orthonormal set ``s_1, ..., s_t`` in R^dim.

    Vectors are stored as rows of a preallocated ``(dim, dim)`` buffer so
    that :meth:`append` never reallocates; :attr:`columns` exposes the usual
    ``dim x t`` matrix S. The projector ``S S^T`` is never formed.
    """

    __slots__ = ("dim", "size", "rows", "tol")

    def __init__(self, dim: int, tol: Tolerances = DEFAULT_TOLERANCES):
        self.dim = int(dim)
        self.size = 0
        self.rows = np.zeros((self.dim, self.dim))
        self.tol = tol

    @property
    def columns(self) -> np.ndarray:
        return self.rows[: self.size].T

    def copy(self) -> "GramSchmidtBasis":
        out = GramSchmidtBasis(self.dim, self.tol)
        out.size = self.size
        out.rows[:] = self.rows
        return out

    def append(self, q) -> np.ndarray:
        """Orthogonalize ``q`` against the basis, normalize, and store it in place.

        A second projection pass runs when the first residual keeps less than
        ``tol.gram_schmidt_reorth`` of the norm of ``q``.
        """
        t = self.size
        if t >= self.dim:
            raise ValueError(f"basis is already full ({self.dim} columns)")
        if not isinstance(q, np.ndarray) or q.dtype != np.float64:
            q = np.asarray(q, dtype=np.float64)
        St = self.rows[:t]
        qq = q.dot(q)
        z = q - St.dot(q).dot(St)
        zz = z.dot(z)
        tol = self.tol
        if zz < tol.gram_schmidt_reorth * tol.gram_schmidt_reorth * qq:
            z -= St.dot(z).dot(St)
            zz = z.dot(z)
        if zz <= tol.gram_schmidt_degenerate * qq or zz == 0.0:
            raise DegenerateResidual(
                f"residual norm^2 {zz:.3g} too small relative to {qq:.3g}"
            )
        s = self.rows[t]
        np.multiply(z, 1.0 / math.sqrt(zz), out=s)
        self.size = t + 1
        return s


def gram_schmidt_append(S: GramSchmidtBasis, q) -> GramSchmidtBasis:
    """Functional form of :meth:`GramSchmidtBasis.append`; ``S`` is left untouched."""
    out = S.copy()
    out.append(q)
    return out


def randomized_range_finder(
    A, m: int, rng: np.random.Generator, oversampling: int = 8,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Approximate the dominant ``m``-dimensional column space of ``A``.

    ``A`` is sketched with a Gaussian test matrix of width ``m + oversampling``
    (capped at the number of columns), the sketch is orthonormalized, and the
    basis is truncated to ``m`` directions with a column-pivoted QR of the
    projected matrix ``Q0^T A``.

    Returns
    -------
    ndarray, shape (n, m)
    """
    A = _as_matrix(A, "A")
    n, c = A.shape
    if not 1 <= m <= min(n, c):
        raise ValueError(f"need 1 <= m <= min(n, c), got m={m} for a {n}x{c} matrix")
    width = min(m + oversampling, c, n)
    omega = rng.standard_normal((c, width))
    Q0, _ = np.linalg.qr(A @ omega, mode="reduced")
    B = Q0.T @ A
    W, R, _ = scipy.linalg.qr(B, mode="economic", pivoting=True)
    d = np.abs(np.diag(R))
    if len(d) < m or d[0] == 0.0 or d[m - 1] < tol.rank_ratio * d[0]:
        raise RankDeficient(f"matrix has numerical rank below {m}")
    return Q0 @ W[:, :m]


def read_matrix(path) -> np.ndarray:
    """Read the plain-text matrix format: a header ``"rows cols"`` then one row per line."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected header 'rows cols'")
        rows, cols = int(header[0]), int(header[1])
        data = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols))
    if data.shape != (rows, cols):
        raise ValueError(f"{path}: header says {rows}x{cols}, found {data.shape}")
    return _as_matrix(data)


def write_matrix(path, A) -> None:
    A = _as_matrix(A)
    with open(path, "w") as fh:
        fh.write(f"{A.shape[0]} {A.shape[1]}\n")
        for row in A:
            # repr() gives the shortest string that round-trips a float64
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")
