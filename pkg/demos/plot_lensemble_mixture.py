"""
General DPPs and L-ensembles through the spectral mixture
=========================================================

Any DPP with a symmetric kernel is a mixture of projection DPPs: keep each
eigenvector independently with its eigenvalue as probability, then sample
the projection DPP spanned by the kept eigenvectors.
"""
import itertools

import numpy as np

from fastdpp import oracle
from fastdpp.mixture import kernel_from_lensemble, lensemble_from_features, sample_dpp

rng = np.random.default_rng(1)
V = rng.standard_normal((4, 4))
L = V @ V.T / 4

dpp = kernel_from_lensemble(L)
print("marginal-kernel eigenvalues:", np.round(dpp.weights, 3))
print("expected sample size       :", dpp.weights.sum())

draws = [sample_dpp(dpp, rng).indices for _ in range(20_000)]
sizes = np.bincount([len(d) for d in draws], minlength=5)
print("sample sizes 0..4:", sizes)
print("GOF p-value vs det(L_S)/det(I+L):",
      round(oracle.law_gof(oracle.lensemble_pmf(L), draws)[1], 3))

###############################################################################
# Fixing the size
# ---------------
# Conditioning on ``|X| = k`` changes the eigenvector selection to a
# draw proportional to products of L-eigenvalues, computed with elementary
# symmetric polynomials.
dpp2 = kernel_from_lensemble(L, size=2)
subsets = tuple(itertools.combinations(range(4), 2))
weights = np.array([oracle.minor_det(L, S) for S in subsets])
pairs = oracle.SubsetLaw(4, subsets, weights / weights.sum())
counts = pairs.counts(sample_dpp(dpp2, rng).indices for _ in range(20_000))
for S, exact, seen in zip(pairs.subsets, pairs.probs, counts):
    print(S, f"exact {exact:.3f}  empirical {seen / 20_000:.3f}")

###############################################################################
# Low-rank features
# -----------------
# When ``L = F F^T`` for an n x p feature matrix, only a p x p eigenproblem
# is needed.
F = rng.standard_normal((1000, 5))
big = lensemble_from_features(F, size=3)
print("3 items out of 1000:", sample_dpp(big, rng).as_tuple())
