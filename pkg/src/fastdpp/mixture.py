"""General DPPs, fixed-size DPPs and L-ensembles through the mixture representation.

A DPP with marginal kernel ``K = U diag(lam) U^T`` is sampled by first keeping
each eigenvector ``u_j`` independently with probability ``lam_j`` and then
sampling the projection DPP spanned by the kept eigenvectors. An L-ensemble
is the DPP with ``K = (I + L)^{-1} L``, so its eigenvectors are kept with
probability ``lam / (1 + lam)`` where ``lam`` are the eigenvalues of ``L``.
Conditioning the eigenvector selection on its size gives fixed-size
versions of both.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import Infeasible, NotPSD, NumericalInstability
from .linalg import SpectralDecomposition, eigendecompose_sym
from .projection import (
    LeverageScores,
    SampleTrace,
    leverage_scores,
    prepare,
    sample_rejection,
    sample_standard,
)

__all__ = [
    "MixtureDPP",
    "ElementaryPolynomialTable",
    "kernel_from_lensemble",
    "mixture_from_kernel",
    "lensemble_from_features",
    "elementary_symmetric",
    "sample_eigenvector_subset",
    "sample_fixed_size_subset",
    "sample_dpp",
    "partial_leverage_update",
]

MARGINAL = "marginal_kernel"
LENSEMBLE = "l_ensemble"


@dataclass(frozen=True)
class MixtureDPP:
    """Spectral description of a DPP ready for mixture sampling.

    ``weights`` are the eigenvector inclusion probabilities, with
    near-null directions already zeroed. ``size`` is ``None`` for the
    unconditioned process, or the required sample size. ``likely`` and
    ``likely_scores`` hold the precomputed leverage scores of the
    eigenvectors with weight at least 1/2, reused by :func:`sample_dpp`.
    """

    spectrum: SpectralDecomposition
    weights: np.ndarray
    source: str = MARGINAL
    size: int | None = None
    likely: np.ndarray | None = None
    likely_scores: LeverageScores | None = None

    @property
    def mode(self) -> str:
        return "bernoulli" if self.size is None else "fixed_size"

    @property
    def n(self) -> int:
        return self.spectrum.eigenvectors.shape[0]

    def odds(self) -> np.ndarray:
        """Per-eigenvector factors ``w / (1 - w)`` whose products give the
        size-conditioned selection law.

        Eigenvalues of ``L`` are exactly these odds; for a marginal kernel,
        weights equal to one become ``inf`` (always selected).
        """
        if self.source == LENSEMBLE:
            lam = np.clip(self.spectrum.eigenvalues, 0.0, None)
            return np.where(self.weights > 0, lam, 0.0)
        w = self.weights
        with np.errstate(divide="ignore"):
            return np.where(w >= 1.0, np.inf, w / (1.0 - w))

    def with_size(self, size: int | None) -> "MixtureDPP":
        return MixtureDPP(self.spectrum, self.weights, self.source, size,
                          self.likely, self.likely_scores)


def _finish(spectrum, weights, source, size, tol):
    weights = np.where(weights < tol.zero_eigenvalue, 0.0, weights)
    likely = np.flatnonzero(weights >= 0.5)
    scores = leverage_scores(spectrum.eigenvectors[:, likely])
    return MixtureDPP(spectrum, weights, source, size, likely, scores)


def mixture_from_kernel(K, size: int | None = None,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> MixtureDPP:
    """Mixture description of ``DPP(K)`` for a marginal kernel ``0 <= K <= I``."""
    spectrum = eigendecompose_sym(K, tol)
    lam = spectrum.eigenvalues
    if lam.size and (lam.min() < -tol.psd or lam.max() > 1.0 + tol.psd):
        raise NotPSD("marginal kernel eigenvalues must lie in [0, 1]")
    return _finish(spectrum, np.clip(lam, 0.0, 1.0), MARGINAL, size, tol)


def kernel_from_lensemble(L_spectrum: SpectralDecomposition, size: int | None = None,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> MixtureDPP:
    """Convert the spectrum of an L-ensemble into mixture weights ``lam / (1 + lam)``.

    Accepts either a :class:`SpectralDecomposition` or the matrix ``L`` itself.
    """
    if not isinstance(L_spectrum, SpectralDecomposition):
        L_spectrum = eigendecompose_sym(L_spectrum, tol)
    lam = np.asarray(L_spectrum.eigenvalues, dtype=np.float64)
    if lam.size and lam.min() < -tol.psd:
        raise NotPSD(f"L has eigenvalue {lam.min():.3g}")
    lam = np.clip(lam, 0.0, None)
    return _finish(L_spectrum, lam / (1.0 + lam), LENSEMBLE, size, tol)


def lensemble_from_features(V, size: int | None = None,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> MixtureDPP:
    """L-ensemble with ``L = V V^T`` from its ``n x p`` feature matrix.

    Only the ``p x p`` Gram matrix ``V^T V`` is diagonalized; eigenvectors of
    ``L`` are recovered as ``V w / sqrt(lam)``. Directions with (near) zero
    eigenvalue are dropped, so the returned spectrum may have fewer than
    ``p`` columns.
    """
    V = np.asarray(V, dtype=np.float64)
    G = eigendecompose_sym(V.T @ V, tol)
    lam = G.eigenvalues
    keep = lam > tol.zero_eigenvalue * max(lam.max(initial=0.0), 1.0)
    lam = lam[keep]
    U = (V @ G.eigenvectors[:, keep]) / np.sqrt(lam)
    return kernel_from_lensemble(SpectralDecomposition(lam, U), size, tol)


@dataclass(frozen=True)
class ElementaryPolynomialTable:
    """``e_k`` of the first ``j`` values, for ``0 <= k <= order`` and ``0 <= j <= n``.

    The recursion runs on values divided by ``scale`` (their maximum) to
    keep entries in range; :attr:`values` restores the true polynomials by
    multiplying row ``k`` by ``scale**k``.
    """

    scaled: np.ndarray
    scale: float

    @property
    def values(self) -> np.ndarray:
        k = np.arange(self.scaled.shape[0])[:, None]
        with np.errstate(over="ignore"):
            return self.scaled * self.scale ** k


def elementary_symmetric(lambdas, m: int) -> ElementaryPolynomialTable:
    lam = np.asarray(lambdas, dtype=np.float64).ravel()
    n = lam.size
    if not 0 <= m <= n:
        raise ValueError(f"order {m} out of range for {n} values")
    scale = float(np.max(np.abs(lam), initial=0.0)) or 1.0
    lam = lam / scale
    E = np.zeros((m + 1, n + 1))
    E[0, :] = 1.0
    for k in range(1, m + 1):
        for j in range(k, n + 1):
            E[k, j] = E[k, j - 1] + lam[j - 1] * E[k - 1, j - 1]
    return ElementaryPolynomialTable(E, scale)


def sample_eigenvector_subset(dpp: MixtureDPP, rng=None) -> np.ndarray:
    """Independent Bernoulli selection of eigenvectors with the mixture weights."""
    rng = np.random.default_rng(rng)
    w = dpp.weights
    return np.flatnonzero(rng.random(w.size) < w)


def sample_fixed_size_subset(lambdas, m: int, rng=None,
                             tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Draw ``Y`` with ``|Y| = m`` and ``P(Y)`` proportional to the product of ``lambdas[Y]``.

    Scans ``j = n, ..., 1`` and keeps ``j`` with probability
    ``lam_j e_{k-1}(lam_1..lam_{j-1}) / e_k(lam_1..lam_j)`` where ``k`` is the
    number of slots left. Infinite entries are always kept.
    """
    rng = np.random.default_rng(rng)
    lam = np.asarray(lambdas, dtype=np.float64).ravel()
    lam = np.where(lam < tol.zero_eigenvalue, 0.0, lam)
    forced = np.flatnonzero(np.isinf(lam))
    if forced.size > m:
        raise Infeasible(f"{forced.size} eigenvectors must be kept but size is {m}")
    finite = np.flatnonzero(np.isfinite(lam))
    k = m - forced.size
    lam_f = lam[finite]
    if np.count_nonzero(lam_f > 0) < k:
        raise Infeasible(f"fewer than {m} positive eigenvalues")
    chosen = []
    if k > 0:
        lam_s = lam_f / lam_f.max()
        E = elementary_symmetric(lam_s, k).scaled
        j = lam_f.size
        u = rng.random(j)
        while k > 0:
            denom = E[k, j]
            if denom <= 0.0 and k <= j:
                raise NumericalInstability(f"e_{k} of the first {j} values underflowed to 0")
            if u[j - 1] * denom < lam_s[j - 1] * E[k - 1, j - 1]:
                chosen.append(finite[j - 1])
                k -= 1
            j -= 1
    return np.sort(np.concatenate([forced, np.array(chosen, dtype=np.intp)])).astype(np.intp)


def partial_leverage_update(U, scores: LeverageScores, likely, Y) -> LeverageScores:
    """Leverage scores of ``U[:, Y]`` from the precomputed scores of ``U[:, likely]``.

    Only the columns in the symmetric difference of ``likely`` and ``Y`` are
    touched.
    """
    likely = set(int(j) for j in likely)
    Y = set(int(j) for j in Y)
    removed = sorted(likely - Y)
    added = sorted(Y - likely)
    if not removed and not added:
        return scores
    U = np.asarray(U)
    values = scores.values.copy()
    if removed:
        R = U[:, removed]
        values -= np.einsum("ij,ij->i", R, R)
    if added:
        A = U[:, added]
        values += np.einsum("ij,ij->i", A, A)
    np.maximum(values, 0.0, out=values)
    return LeverageScores(values, float(values.sum()))


def sample_dpp(dpp: MixtureDPP, rng=None, algorithm: str = "rejection",
               cache: bool = False) -> SampleTrace:
    """Sample the DPP described by ``dpp``.

    Selects eigenvectors (independently, or conditioned on ``dpp.size``),
    then samples the projection DPP they span. An empty selection yields an
    empty trace.
    """
    rng = np.random.default_rng(rng)
    if dpp.size is None:
        Y = sample_eigenvector_subset(dpp, rng)
    else:
        Y = sample_fixed_size_subset(dpp.odds(), dpp.size, rng)
    if Y.size == 0:
        empty = np.zeros(0, dtype=np.intp)
        return SampleTrace(empty, empty.copy())
    Q = dpp.spectrum.eigenvectors[:, Y]
    if algorithm == "standard":
        return sample_standard(Q, rng)
    scores = None
    if dpp.likely is not None:
        scores = partial_leverage_update(dpp.spectrum.eigenvectors, dpp.likely_scores,
                                         dpp.likely, Y)
    return sample_rejection(prepare(Q, cache=cache, scores=scores), rng)
