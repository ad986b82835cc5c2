"""
Thinning an i.i.d. pool into a DPP sample
=========================================

Run the rejection sampler on a fixed, shuffled pool of i.i.d. leverage-score
draws. If the pool runs dry before ``m`` items are accepted, the attempt
fails; otherwise the output is an exact DPP sample.
"""
import math

import numpy as np

from fastdpp import thinning
from fastdpp.bench import random_basis

rng = np.random.default_rng(2)
m = 10
Q = random_basis(100, m, rng)

for factor in (0.5, 1.0, 2.0):
    size = math.ceil(factor * m * math.log(m))
    rate = thinning.thinning_success_rate(Q, size, 2000, rng)
    print(f"pool {size:4d} (= {factor} m ln m): success {rate:.3f}")

for delta in (0.25, 0.1):
    size = thinning.thinning_pool_size(m, delta)
    rate = thinning.thinning_success_rate(Q, size, 2000, rng)
    print(f"pool {size:4d} sized for delta={delta}: success {rate:.3f} (>= {1 - delta})")

###############################################################################
# The m log m threshold cannot be beaten: on the stratified DPP, which picks
# one item per segment, thinning is a coupon collector problem.
for l in (m, 2 * m, math.ceil(3 * m * math.log(m))):
    urns = thinning.coupon_collector_experiment(m, l, 5000, rng)
    print(f"l={l:3d}: P(all {m} segments hit) = {urns:.3f}")
print("bound on P(T < 2m):", round(thinning.coupon_collector_bound(m, 2 * m), 3))
