"""
Sampling a projection DPP two ways
==================================

A projection DPP is fixed by an orthonormal basis ``Q``. Its samples always
contain ``m = Q.shape[1]`` items, and item ``i`` shows up with probability
equal to its leverage score ``|Q_i|^2``.
"""
import numpy as np

from fastdpp import oracle, prepare, sample_rejection, sample_standard
from fastdpp.bench import random_basis

rng = np.random.default_rng(0)
Q = random_basis(6, 3, rng)

# the classical sampler updates all n conditional masses after each pick
print("standard :", sample_standard(Q, rng).as_tuple())

# the rejection sampler pays O(nm) once (leverage scores + alias table) ...
prep = prepare(Q)
print("leverage :", np.round(prep.scores.values, 3), "sum =", prep.scores.total)

# ... and then proposes from the leverage scores, keeping a proposal with
# probability equal to the share of its mass that is left
tr = sample_rejection(prep, rng)
print("rejection:", tr.as_tuple(), "proposals per step:", tr.proposals_per_step)

###############################################################################
# Both samplers target the same law. For n = 6 the oracle can enumerate all
# 20 three-subsets and their probabilities ``det K_S``.
law = oracle.projection_pmf(Q)
draws = [sample_rejection(prep, rng).indices for _ in range(20_000)]
stat, p = oracle.law_gof(law, draws)
print(f"chi-square vs exact law: stat={stat:.1f} p={p:.3f}")

freq = law.counts(draws) / len(draws)
for S, exact, seen in list(zip(law.subsets, law.probs, freq))[:5]:
    print(S, f"exact {exact:.4f}  empirical {seen:.4f}")
