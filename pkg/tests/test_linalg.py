import numpy as np
import pytest

from fastdpp.errors import DegenerateResidual, NotSymmetric, RankDeficient
from fastdpp.linalg import (
    GramSchmidtBasis,
    check_orthonormal,
    eigendecompose_sym,
    gram_schmidt_append,
    orthonormalize,
    randomized_range_finder,
    read_matrix,
    write_matrix,
)

from conftest import random_basis


def ortho_err(Q):
    return np.max(np.abs(Q.T @ Q - np.eye(Q.shape[1])))


class TestOrthonormalize:
    def test_identity(self):
        Q = orthonormalize(np.eye(3))
        np.testing.assert_allclose(np.abs(Q), np.eye(3), atol=1e-15)

    def test_axis_aligned(self):
        Q = orthonormalize([[2, 0], [0, 3], [0, 0]])
        np.testing.assert_allclose(np.abs(Q), [[1, 0], [0, 1], [0, 0]], atol=1e-15)

    def test_random_gaussian(self, rng):
        V = rng.standard_normal((50, 5))
        Q = orthonormalize(V)
        assert ortho_err(Q) <= 1e-10
        assert np.linalg.norm(V - Q @ (Q.T @ V)) <= 1e-8

    def test_rank_deficient(self, rng):
        v = rng.standard_normal((10, 1))
        with pytest.raises(RankDeficient):
            orthonormalize(np.hstack([v, 2 * v]))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            orthonormalize([[np.nan], [1.0]])


class TestEigendecompose:
    def test_diagonal(self):
        w, U = eigendecompose_sym(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(w, [3, 2, 1])

    def test_swap_matrix(self):
        # eigenpairs of [[0,1],[1,0]]: 1 -> (1,1)/sqrt2, -1 -> (1,-1)/sqrt2
        w, U = eigendecompose_sym([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(w, [1, -1], atol=1e-15)
        r = 1 / np.sqrt(2)
        np.testing.assert_allclose(np.abs(U[:, 0]), [r, r], atol=1e-15)
        assert U[0, 1] * U[1, 1] < 0

    def test_projection_spectrum(self, rng):
        Q = random_basis(12, 4, rng)
        w, _ = eigendecompose_sym(Q @ Q.T)
        np.testing.assert_allclose(w, [1] * 4 + [0] * 8, atol=1e-8)

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            eigendecompose_sym([[0.0, 1.0], [0.0, 0.0]])

    def test_reconstruction_random(self, rng):
        for _ in range(20):
            A = rng.standard_normal((20, 20))
            M = A + A.T
            sd = eigendecompose_sym(M)
            U = sd.eigenvectors
            assert np.all(np.diff(sd.eigenvalues) <= 0)
            assert np.max(np.abs(U.T @ U - np.eye(20))) <= 1e-8
            assert np.linalg.norm(sd.reconstruct() - M) <= 1e-8 * np.linalg.norm(M)


class TestGramSchmidt:
    def test_normalization_only(self):
        S = gram_schmidt_append(GramSchmidtBasis(2), [2.0, 0.0])
        np.testing.assert_allclose(S.columns[:, 0], [1, 0])

    def test_second_step(self):
        S = gram_schmidt_append(GramSchmidtBasis(2), [1.0, 0.0])
        S2 = gram_schmidt_append(S, [1.0, 1.0])
        np.testing.assert_allclose(S2.columns[:, 1], [0, 1], atol=1e-15)
        assert S.size == 1  # functional form leaves the input alone

    def test_full_basis_rejected(self):
        S = GramSchmidtBasis(1)
        S.append([1.0])
        with pytest.raises(ValueError):
            gram_schmidt_append(S, [1.0])

    def test_dependent_vector(self):
        S = GramSchmidtBasis(3)
        S.append([1.0, 1.0, 0.0])
        with pytest.raises(DegenerateResidual):
            S.append([2.0, 2.0, 0.0])

    def test_orthonormal_and_idempotent(self, rng):
        for _ in range(100):
            m = int(rng.integers(2, 12))
            S = GramSchmidtBasis(m)
            for q in rng.standard_normal((m, m)):
                S.append(q)
            C = S.columns
            assert np.max(np.abs(C.T @ C - np.eye(m))) <= 1e-8
            P = C[:, : m // 2] @ C[:, : m // 2].T
            assert np.max(np.abs(P @ P - P)) <= 1e-8

    def test_nearly_dependent_rows(self, rng):
        # reorthogonalization keeps the basis clean for nearly parallel inputs
        S = GramSchmidtBasis(5)
        base = rng.standard_normal(5)
        for k in range(5):
            e = np.zeros(5)
            e[k] = 1e-4
            S.append(base + e)
        C = S.columns
        assert np.max(np.abs(C.T @ C - np.eye(5))) <= 1e-8


class TestRangeFinder:
    def test_exact_rank(self, rng):
        A = rng.standard_normal((200, 10)) @ rng.standard_normal((10, 50))
        Q = randomized_range_finder(A, 10, rng)
        assert ortho_err(Q) <= 1e-10
        assert np.linalg.norm(A - Q @ (Q.T @ A)) <= 1e-8 * np.linalg.norm(A)

    def test_gaussian_kernel_vs_svd(self, rng):
        from fastdpp.bench import gaussian_kernel_columns
        n, m = 500, 20
        X = rng.uniform(-3, 3, size=(n, 2))
        A = gaussian_kernel_columns(X, rng.choice(n, 5 * m, replace=False), sigma=1.0)
        Q = randomized_range_finder(A, m, rng)
        s = np.linalg.svd(A, compute_uv=False)
        best = np.sqrt(np.sum(s[m:] ** 2))
        assert ortho_err(Q) <= 1e-10
        assert np.linalg.norm(A - Q @ (Q.T @ A)) <= 10 * best

    def test_no_truncation(self, rng):
        A = rng.standard_normal((30, 6))
        Q = randomized_range_finder(A, 6, rng)
        Q2 = orthonormalize(A)
        assert np.max(np.abs(Q @ Q.T - Q2 @ Q2.T)) <= 1e-8

    def test_rank_too_low(self, rng):
        A = rng.standard_normal((40, 3)) @ rng.standard_normal((3, 20))
        with pytest.raises(RankDeficient):
            randomized_range_finder(A, 5, rng)


def test_check_orthonormal_rejects(rng):
    with pytest.raises(ValueError):
        check_orthonormal(rng.standard_normal((5, 2)))


def test_matrix_text_roundtrip(tmp_path, rng):
    A = rng.standard_normal((7, 3)) * 10.0 ** rng.integers(-300, 300, size=(7, 3))
    A[0, 0] = 0.1 + 0.2
    path = tmp_path / "a.txt"
    write_matrix(path, A)
    assert path.read_text().splitlines()[0] == "7 3"
    B = read_matrix(path)
    assert np.array_equal(A, B)


def test_matrix_text_shape_mismatch(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2 2\n1 2\n3 4\n5 6\n")
    with pytest.raises(ValueError):
        read_matrix(path)
