"""Brute-force ground truth for small DPPs and the goodness-of-fit tests built on it.

Subset laws are computed by enumerating every admissible subset and taking
principal minors, so everything here is exponential in ``n`` and guarded by
size limits. Subsets are enumerated by size, then lexicographically.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import stats

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InsufficientSamples, NotPSD, NotSymmetric, TooLarge
from .linalg import check_orthonormal

__all__ = [
    "SubsetLaw",
    "check_kernel",
    "minor_det",
    "projection_pmf",
    "lensemble_pmf",
    "kernel_pmf",
    "fixed_size_pmf",
    "inclusion_probabilities",
    "chi_square_gof",
    "chi_square_two_sample",
    "geometric_gof",
    "law_gof",
    "total_variation",
]


@dataclass(frozen=True)
class SubsetLaw:
    """Exact distribution over subsets of ``{0, ..., n-1}``."""

    n: int
    subsets: tuple
    probs: np.ndarray

    def as_dict(self) -> dict:
        return dict(zip(self.subsets, self.probs.tolist()))

    def prob(self, S) -> float:
        return self.as_dict().get(tuple(sorted(S)), 0.0)

    def counts(self, samples: Iterable) -> np.ndarray:
        """Tally sampled sets against :attr:`subsets`.

        Raises ``KeyError`` on a set outside the support.
        """
        index = {S: k for k, S in enumerate(self.subsets)}
        out = np.zeros(len(self.subsets), dtype=np.int64)
        for s in samples:
            out[index[tuple(sorted(int(i) for i in s))]] += 1
        return out


def check_kernel(K, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Validate a marginal kernel: symmetric with spectrum in [0, 1]."""
    K = np.asarray(K, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise NotSymmetric(f"kernel must be square, got {K.shape}")
    if np.max(np.abs(K - K.T), initial=0.0) > 1e-10:
        raise NotSymmetric("kernel is not symmetric")
    lam = np.linalg.eigvalsh(K)
    if lam.size and (lam[0] < -tol.psd or lam[-1] > 1 + tol.psd):
        raise NotPSD("kernel eigenvalues must lie in [0, 1]")
    return K


def minor_det(M: np.ndarray, S) -> float:
    """Determinant of the principal submatrix ``M[S, S]`` by pivoted LU, floored at 0."""
    S = list(S)
    if not S:
        return 1.0
    # numpy's det is a partial-pivoting LU (LAPACK getrf)
    return max(float(np.linalg.det(M[np.ix_(S, S)])), 0.0)


def _guard(count: int, limit: int = 10**6):
    if count > limit:
        raise TooLarge(f"{count} subsets exceed the enumeration limit {limit}")


def projection_pmf(Q) -> SubsetLaw:
    """Law of a projection DPP: ``P(X = S) = det K_S`` on subsets of size ``m``."""
    Q = check_orthonormal(Q)
    n, m = Q.shape
    if n > 20:
        raise TooLarge(f"n={n} exceeds 20")
    _guard(math.comb(n, m))
    K = Q @ Q.T
    subsets = tuple(itertools.combinations(range(n), m))
    probs = np.array([minor_det(K, S) for S in subsets])
    return SubsetLaw(n, subsets, probs)


def _all_subsets(n):
    return tuple(S for k in range(n + 1) for S in itertools.combinations(range(n), k))


def lensemble_pmf(L) -> SubsetLaw:
    """Law of an L-ensemble: ``P(X = S) = det L_S / det(I + L)`` over all subsets."""
    L = np.asarray(L, dtype=np.float64)
    n = L.shape[0]
    if n > 15:
        raise TooLarge(f"n={n} exceeds 15")
    subsets = _all_subsets(n)
    weights = np.array([minor_det(L, S) for S in subsets])
    return SubsetLaw(n, subsets, weights / np.linalg.det(np.eye(n) + L))


def kernel_pmf(K) -> SubsetLaw:
    """Law of ``DPP(K)`` for a general marginal kernel.

    Uses ``P(X = S) = |det(K - I_{S^c})|`` where ``I_{S^c}`` is the identity
    restricted to the complement of ``S``.
    """
    K = check_kernel(K)
    n = K.shape[0]
    if n > 15:
        raise TooLarge(f"n={n} exceeds 15")
    subsets = _all_subsets(n)
    probs = np.empty(len(subsets))
    for k, S in enumerate(subsets):
        D = np.ones(n)
        D[list(S)] = 0.0
        probs[k] = abs(np.linalg.det(K - np.diag(D)))
    return SubsetLaw(n, subsets, probs)


def fixed_size_pmf(lambdas, m: int) -> SubsetLaw:
    """Law over ``m``-subsets proportional to the product of the selected values."""
    lam = np.asarray(lambdas, dtype=np.float64)
    n = lam.size
    _guard(math.comb(n, m))
    subsets = tuple(itertools.combinations(range(n), m))
    w = np.array([float(np.prod(lam[list(S)])) for S in subsets])
    return SubsetLaw(n, subsets, w / w.sum())


def inclusion_probabilities(law: SubsetLaw) -> np.ndarray:
    out = np.zeros(law.n)
    for S, p in zip(law.subsets, law.probs):
        out[list(S)] += p
    return out


def total_variation(a: SubsetLaw, b: SubsetLaw) -> float:
    da, db = a.as_dict(), b.as_dict()
    keys = set(da) | set(db)
    return 0.5 * sum(abs(da.get(k, 0.0) - db.get(k, 0.0)) for k in keys)


def _merge_small(expected: np.ndarray, min_expected: float) -> list[list[int]]:
    """Group categories so each group's expected count reaches ``min_expected``.

    Categories are absorbed smallest-probability first (ties by index).
    """
    order = sorted(range(len(expected)), key=lambda k: (expected[k], k))
    groups, current, mass = [], [], 0.0
    for k in order:
        current.append(k)
        mass += expected[k]
        if mass >= min_expected:
            groups.append(current)
            current, mass = [], 0.0
    if current:
        if not groups:
            groups.append(current)
        else:
            groups[-1].extend(current)
    return groups


def chi_square_gof(counts, probs, min_expected: float = 5.0) -> tuple[float, float]:
    """Pearson goodness-of-fit test of ``counts`` against the law ``probs``.

    Categories with expected count below ``min_expected`` are pooled,
    smallest probability first. Observations in a zero-probability category
    make the statistic infinite.

    Returns
    -------
    statistic, p_value
    """
    counts = np.asarray(counts, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if counts.shape != probs.shape:
        raise ValueError("counts and probs must have the same shape")
    total = counts.sum()
    probs = probs / probs.sum()
    null = probs <= 0
    if np.any(counts[null] > 0):
        return math.inf, 0.0
    counts, probs = counts[~null], probs[~null]
    expected = total * probs
    groups = _merge_small(expected, min_expected)
    if len(groups) < 2:
        raise InsufficientSamples(
            f"only {len(groups)} category reaches {min_expected} expected counts"
        )
    obs = np.array([counts[g].sum() for g in groups])
    exp = np.array([expected[g].sum() for g in groups])
    if exp.min() < min_expected:
        raise InsufficientSamples("cannot reach the minimum expected count")
    stat = float(np.sum((obs - exp) ** 2 / exp))
    return stat, float(stats.chi2.sf(stat, len(groups) - 1))


def law_gof(law: SubsetLaw, samples) -> tuple[float, float]:
    """GOF of sampled sets against an exact subset law."""
    return chi_square_gof(law.counts(samples), law.probs)


def chi_square_two_sample(samples_a, samples_b, min_expected: float = 5.0) -> tuple[float, float]:
    """Homogeneity test between two collections of sampled sets."""
    keys = sorted({tuple(sorted(map(int, s))) for s in itertools.chain(samples_a, samples_b)})
    index = {k: i for i, k in enumerate(keys)}
    table = np.zeros((2, len(keys)))
    for row, samples in enumerate((samples_a, samples_b)):
        for s in samples:
            table[row, index[tuple(sorted(map(int, s)))]] += 1
    pooled = table.sum(axis=0)
    n_a, n_b = table.sum(axis=1)
    groups = _merge_small(pooled * min(n_a, n_b) / (n_a + n_b), min_expected)
    if len(groups) < 2:
        raise InsufficientSamples("not enough distinct sets for a two-sample test")
    merged = np.array([[row[g].sum() for g in groups] for row in table])
    stat, p, _, _ = stats.chi2_contingency(merged, correction=False)
    return float(stat), float(p)


def geometric_gof(values, p: float, min_expected: float = 5.0) -> tuple[float, float]:
    """GOF of positive integer draws against Geometric(p) on {1, 2, ...}."""
    values = np.asarray(values, dtype=np.int64)
    if p >= 1.0:
        return (0.0, 1.0) if np.all(values == 1) else (math.inf, 0.0)
    kmax = int(max(values.max(), 1))
    k = np.arange(1, kmax + 1)
    probs = p * (1 - p) ** (k - 1)
    counts = np.bincount(values, minlength=kmax + 1)[1:]
    # tail P(R > kmax) as an extra, empty category
    probs = np.append(probs, (1 - p) ** kmax)
    counts = np.append(counts, 0)
    return chi_square_gof(counts, probs, min_expected)
