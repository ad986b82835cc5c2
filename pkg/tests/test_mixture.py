import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fastdpp.errors import Infeasible, NotPSD
from fastdpp.linalg import SpectralDecomposition, eigendecompose_sym
from fastdpp.mixture import (
    elementary_symmetric,
    kernel_from_lensemble,
    lensemble_from_features,
    mixture_from_kernel,
    partial_leverage_update,
    sample_dpp,
    sample_eigenvector_subset,
    sample_fixed_size_subset,
)
from fastdpp.oracle import (
    SubsetLaw,
    fixed_size_pmf,
    kernel_pmf,
    law_gof,
    lensemble_pmf,
    projection_pmf,
)
from fastdpp.projection import leverage_scores

from conftest import random_basis


def brute_esp(lam, k):
    return sum(math.prod(c) for c in itertools.combinations(lam, k))


def conditioned(law: SubsetLaw, m: int) -> SubsetLaw:
    keep = [i for i, S in enumerate(law.subsets) if len(S) == m]
    p = law.probs[keep]
    return SubsetLaw(law.n, tuple(law.subsets[i] for i in keep), p / p.sum())


def spectrum(lam):
    lam = np.asarray(lam, dtype=float)
    return SpectralDecomposition(lam, np.eye(lam.size))


class TestLensembleConversion:
    def test_weights(self):
        dpp = kernel_from_lensemble(spectrum([1.0, 0.0]))
        np.testing.assert_allclose(dpp.weights, [0.5, 0.0])

    def test_expected_size(self):
        assert kernel_from_lensemble(spectrum([3.0, 1.0])).weights.sum() == pytest.approx(1.25)

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            kernel_from_lensemble(spectrum([1.0, -0.1]))

    def test_monotone_grid(self):
        lam = np.concatenate([[0.0], np.logspace(-10, 10, 400)])
        w = kernel_from_lensemble(spectrum(lam)).weights
        assert np.all((w >= 0) & (w < 1))
        assert np.all(np.diff(w[lam >= 1e-12]) > 0)

    def test_from_matrix(self, rng):
        A = rng.standard_normal((5, 5))
        L = A @ A.T
        dpp = kernel_from_lensemble(L)
        K = np.linalg.solve(np.eye(5) + L, L)
        np.testing.assert_allclose(np.sort(dpp.weights), np.linalg.eigvalsh(K), atol=1e-10)

    def test_features_spectrum(self, rng):
        V = rng.standard_normal((30, 4))
        dpp = lensemble_from_features(V)
        ref = eigendecompose_sym(V @ V.T).eigenvalues[:4]
        np.testing.assert_allclose(dpp.spectrum.eigenvalues, ref, rtol=1e-10)
        U = dpp.spectrum.eigenvectors
        np.testing.assert_allclose(U.T @ U, np.eye(4), atol=1e-10)
        np.testing.assert_allclose((U * dpp.spectrum.eigenvalues) @ U.T, V @ V.T, atol=1e-9)


class TestEigenvectorSubset:
    def test_all_one(self, rng):
        dpp = mixture_from_kernel(np.eye(4))
        assert sample_eigenvector_subset(dpp, rng).tolist() == [0, 1, 2, 3]

    def test_all_zero(self, rng):
        dpp = mixture_from_kernel(np.zeros((4, 4)))
        assert sample_eigenvector_subset(dpp, rng).size == 0
        assert sample_dpp(dpp, rng).indices.size == 0

    def test_half_half(self, rng):
        dpp = kernel_from_lensemble(spectrum([1.0, 1.0]))
        N = 100_000
        hits = sum(sample_eigenvector_subset(dpp, rng).size == 1 for _ in range(N))
        assert abs(hits / N - 0.5) <= 4 * math.sqrt(0.25 / N)


class TestElementarySymmetric:
    def test_small(self):
        assert elementary_symmetric([1, 2, 3], 2).values[2, 3] == pytest.approx(brute_esp([1, 2, 3], 2))
        assert brute_esp([1, 2, 3], 2) == 11

    def test_binomial(self):
        E = elementary_symmetric(np.ones(9), 9).values
        for k in range(10):
            assert E[k, 9] == pytest.approx(math.comb(9, k))

    def test_order_zero(self):
        assert elementary_symmetric([4.0, 5.0], 0).values[0, 2] == 1.0

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=8), st.data())
    def test_brute_force(self, lam, data):
        m = data.draw(st.integers(0, len(lam)))
        T = elementary_symmetric(lam, m)
        E = T.values
        for k in range(m + 1):
            for j in range(len(lam) + 1):
                if k > j:
                    assert E[k, j] == 0
                else:
                    assert E[k, j] == pytest.approx(brute_esp(lam[:j], k), rel=1e-9, abs=1e-12)
        S = T.scaled
        for k in range(1, m + 1):
            for j in range(1, len(lam) + 1):
                assert S[k, j] == S[k, j - 1] + (lam[j - 1] / T.scale) * S[k - 1, j - 1]

    def test_large_no_overflow(self, rng):
        lam = rng.uniform(0, 1e3, size=2000)
        T = elementary_symmetric(lam, 60)
        assert np.all(np.isfinite(T.scaled))


class TestFixedSize:
    def test_symmetric(self, rng):
        N = 20_000
        hits = sum(sample_fixed_size_subset([1.0, 1.0], 1, rng)[0] == 0 for _ in range(N))
        assert abs(hits / N - 0.5) <= 4 * math.sqrt(0.25 / N)

    def test_two_thirds(self, rng):
        N = 20_000
        hits = sum(sample_fixed_size_subset([2.0, 1.0], 1, rng)[0] == 0 for _ in range(N))
        assert abs(hits / N - 2 / 3) <= 4 * math.sqrt(2 / 9 / N)

    def test_law_123(self, rng):
        draws = [sample_fixed_size_subset([1.0, 2.0, 3.0], 2, rng) for _ in range(100_000)]
        assert law_gof(fixed_size_pmf([1, 2, 3], 2), draws)[1] > 1e-3

    def test_infeasible(self, rng):
        with pytest.raises(Infeasible):
            sample_fixed_size_subset([1.0, 0.0, 0.0], 2, rng)

    def test_forced_and_large(self, rng):
        lam = np.concatenate([[np.inf], rng.uniform(0, 50, size=500)])
        Y = sample_fixed_size_subset(lam, 40, rng)
        assert Y.size == 40 and Y[0] == 0 and len(set(Y.tolist())) == 40

    def test_zero_eigenvalues_never_chosen(self, rng):
        for _ in range(200):
            Y = sample_fixed_size_subset([1.0, 0.0, 2.0, 1e-14, 0.5], 3, rng)
            assert set(Y.tolist()) == {0, 2, 4}


class TestSampleDpp:
    def test_projection_kernel(self, rng):
        Q = random_basis(5, 2, rng)
        dpp = mixture_from_kernel(Q @ Q.T)
        draws = [sample_dpp(dpp, rng).indices for _ in range(50_000)]
        assert law_gof(projection_pmf(Q), draws)[1] > 1e-3

    def test_inclusion_minors(self, rng):
        U = random_basis(4, 4, rng)
        K = (U * [0.9, 0.5, 0.1, 0.0]) @ U.T
        dpp = mixture_from_kernel(K)
        N = 200_000
        X = np.zeros((N, 4), dtype=bool)
        for r in range(N):
            X[r, sample_dpp(dpp, rng).indices] = True
        for size in (1, 2):
            for S in itertools.combinations(range(4), size):
                p = np.linalg.det(K[np.ix_(S, S)])
                emp = np.mean(X[:, list(S)].all(axis=1))
                assert abs(emp - p) <= 4 * math.sqrt(p * (1 - p) / N) + 1e-12

    def test_expected_size(self, rng):
        U = random_basis(4, 4, rng)
        lam = np.array([0.8, 0.6, 0.3, 0.05])
        dpp = mixture_from_kernel((U * lam) @ U.T)
        N = 100_000
        sizes = np.array([sample_dpp(dpp, rng).indices.size for _ in range(N)])
        var = np.sum(lam * (1 - lam))
        assert abs(sizes.mean() - lam.sum()) <= 4 * math.sqrt(var / N)

    def test_lensemble_law(self, rng):
        L = np.array([[2.0, 0.5, 0.2], [0.5, 1.0, 0.3], [0.2, 0.3, 0.7]])
        dpp = kernel_from_lensemble(L)
        draws = [sample_dpp(dpp, rng).indices for _ in range(200_000)]
        assert law_gof(lensemble_pmf(L), draws)[1] > 1e-3

    def test_fixed_size_lensemble(self, rng):
        A = rng.standard_normal((6, 6))
        L = A @ A.T / 6
        dpp = kernel_from_lensemble(L, size=3)
        draws = [sample_dpp(dpp, rng).indices for _ in range(50_000)]
        assert all(len(d) == 3 for d in draws)
        assert law_gof(conditioned(lensemble_pmf(L), 3), draws)[1] > 1e-3

    def test_fixed_size_marginal_kernel(self, rng):
        U = random_basis(5, 5, rng)
        K = (U * [0.95, 0.7, 0.4, 0.2, 0.05]) @ U.T
        dpp = mixture_from_kernel(K, size=2)
        draws = [sample_dpp(dpp, rng, algorithm="standard").indices for _ in range(50_000)]
        assert law_gof(conditioned(kernel_pmf(K), 2), draws)[1] > 1e-3

    def test_features_route(self, rng):
        V = rng.standard_normal((5, 3))
        dpp = lensemble_from_features(V)
        draws = [sample_dpp(dpp, rng).indices for _ in range(50_000)]
        assert law_gof(lensemble_pmf(V @ V.T), draws)[1] > 1e-3


class TestPartialLeverage:
    def test_identity(self, rng):
        U = random_basis(10, 10, rng)
        scores = leverage_scores(U[:, [0, 2]])
        assert partial_leverage_update(U, scores, [0, 2], [2, 0]) is scores

    def test_swap(self, rng):
        U = random_basis(10, 10, rng)
        scores = leverage_scores(U[:, [1, 2]])
        out = partial_leverage_update(U, scores, [1, 2], [1, 3])
        np.testing.assert_allclose(out.values, scores.values - U[:, 2] ** 2 + U[:, 3] ** 2,
                                   atol=1e-15)

    def test_random(self, rng):
        U = random_basis(100, 100, rng)
        for _ in range(20):
            likely = np.flatnonzero(rng.random(100) < 0.3)
            Y = np.flatnonzero(rng.random(100) < 0.3)
            out = partial_leverage_update(U, leverage_scores(U[:, likely]), likely, Y)
            np.testing.assert_allclose(out.values, leverage_scores(U[:, Y]).values,
                                       atol=1e-10, rtol=0)

    def test_likely_set(self, rng):
        dpp = kernel_from_lensemble(spectrum([3.0, 1.0, 0.5, 0.0]))
        assert dpp.likely.tolist() == [0, 1]
