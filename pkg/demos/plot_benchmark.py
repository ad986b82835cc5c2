"""
Runtime of the two samplers as n grows
======================================

The classical sampler costs O(nm^2) per sample. After preprocessing, the
rejection sampler's cost does not depend on n. The CSV written here can be
plotted with any tool.
"""
from fastdpp.bench import BenchConfig, run_benchmark

cfg = BenchConfig(n_values=[100, 1000, 10_000], m_values=[20], repetitions=15, seed=0)
report = run_benchmark(cfg)
print(report.to_csv())

for n in cfg.n_values:
    std = report.get(n, 20, "standard").median_s
    rej = report.get(n, 20, "rejection").median_s
    print(f"n={n:6d}: standard {std * 1e3:7.3f} ms, rejection {rej * 1e3:6.3f} ms")
