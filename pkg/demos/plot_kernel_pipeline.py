"""
From data points to a diverse subset
====================================

Build a few columns of a Gaussian kernel, find an orthonormal basis of
their dominant range with a randomized range finder, then draw a projection
DPP on that basis. The sampled points spread across the clusters.
"""
import numpy as np

from fastdpp.bench import PipelineConfig, gaussian_blobs, run_pipeline

rng = np.random.default_rng(3)
X = gaussian_blobs(500, d=2, centers=4, spread=0.6, rng=rng)

res = run_pipeline(PipelineConfig(m=12, points=X, sigma=1.5), rng)
print("picked points:", sorted(res.indices.tolist()))
print("proposals used:", res.proposals)
for phase, sec in res.timings.items():
    print(f"{phase:7s} {sec * 1e3:.3f} ms")

# distance from each sampled point to its nearest other sampled point,
# against the same for a uniform subset of the same size
def nearest(P):
    d = np.sqrt(((P[:, None] - P[None]) ** 2).sum(-1))
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1).mean()

uniform = rng.choice(len(X), size=12, replace=False)
print("mean nearest-neighbour distance: DPP", round(nearest(X[res.indices]), 2),
      "uniform", round(nearest(X[uniform]), 2))
