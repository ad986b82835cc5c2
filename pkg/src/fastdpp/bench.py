"""Runtime benchmarks of the two projection samplers and the Gaussian-kernel pipeline.

Times are wall-clock seconds from :func:`time.perf_counter`. Each
repetition ``r`` of a benchmark cell draws from its own generator seeded
with ``seed + r``, so results do not depend on execution order.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

import numpy as np

from .linalg import orthonormalize, randomized_range_finder
from .projection import leverage_scores, prepare, sample_rejection, sample_standard

__all__ = [
    "BenchConfig",
    "BenchRow",
    "BenchReport",
    "PipelineConfig",
    "PipelineResult",
    "CSV_HEADER",
    "random_basis",
    "gaussian_blobs",
    "gaussian_kernel_columns",
    "run_benchmark",
    "run_pipeline",
]

CSV_HEADER = ("n", "m", "algorithm", "phase", "median_s", "q1_s", "q3_s", "mean_R")
ALGORITHMS = ("standard", "rejection")


@dataclass
class BenchConfig:
    n_values: list
    m_values: list
    repetitions: int = 100
    seed: int = 0
    algorithms: tuple = ALGORITHMS
    include_preprocessing: bool = False
    cache: bool = False

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if min(self.n_values) < max(self.m_values):
            raise ValueError("every n must be at least every m")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")


@dataclass
class BenchRow:
    n: int
    m: int
    algorithm: str
    phase: str
    median_s: float
    q1_s: float
    q3_s: float
    mean_R: float
    times: np.ndarray = field(repr=False, default=None)
    samples: list = field(repr=False, default=None)

    def as_tuple(self):
        return (self.n, self.m, self.algorithm, self.phase,
                self.median_s, self.q1_s, self.q3_s, self.mean_R)


@dataclass
class BenchReport:
    rows: list

    def get(self, n, m, algorithm, phase="sample") -> BenchRow:
        for row in self.rows:
            if (row.n, row.m, row.algorithm, row.phase) == (n, m, algorithm, phase):
                return row
        raise KeyError((n, m, algorithm, phase))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows:
            w.writerow([row.n, row.m, row.algorithm, row.phase,
                        repr(row.median_s), repr(row.q1_s), repr(row.q3_s), repr(row.mean_R)])
        return buf.getvalue()


def random_basis(n: int, m: int, rng) -> np.ndarray:
    """Orthonormal ``n x m`` basis from the QR factorization of a Gaussian matrix."""
    rng = np.random.default_rng(rng)
    return orthonormalize(rng.standard_normal((n, m)))


def _row(n, m, algorithm, phase, times, proposals, samples=None):
    times = np.asarray(times)
    q1, med, q3 = np.percentile(times, [25, 50, 75])
    return BenchRow(n, m, algorithm, phase, float(med), float(q1), float(q3),
                    float(np.mean(proposals)), times, samples)


def run_benchmark(cfg: BenchConfig, keep_samples: bool = False) -> BenchReport:
    """Median sampling time of each algorithm over a grid of ``(n, m)``.

    For every cell a random basis is drawn, its leverage scores and alias
    table are computed once, and each algorithm is timed over
    ``cfg.repetitions`` runs. The ``preprocess`` phase (leverage scores plus
    alias table) is reported only when ``cfg.include_preprocessing`` is set.
    """
    rows = []
    for n in cfg.n_values:
        for m in cfg.m_values:
            Q = random_basis(n, m, np.random.default_rng([cfg.seed, n, m]))
            if cfg.include_preprocessing:
                pre_times = []
                for _ in range(cfg.repetitions):
                    t0 = time.perf_counter()
                    prep = prepare(Q, cache=cfg.cache)
                    pre_times.append(time.perf_counter() - t0)
            else:
                prep = prepare(Q, cache=cfg.cache)
            for alg in cfg.algorithms:
                if cfg.include_preprocessing:
                    rows.append(_row(n, m, alg, "preprocess",
                                     pre_times if alg == "rejection" else _time_scores(Q, cfg.repetitions),
                                     [0.0]))
                times, props, samples = [], [], []
                for r in range(cfg.repetitions):
                    rng = np.random.default_rng(cfg.seed + r)
                    t0 = time.perf_counter()
                    if alg == "standard":
                        tr = sample_standard(Q, rng)
                    else:
                        tr = sample_rejection(prep, rng)
                    times.append(time.perf_counter() - t0)
                    props.append(tr.total_proposals)
                    if keep_samples:
                        samples.append(tr.as_tuple())
                rows.append(_row(n, m, alg, "sample", times, props,
                                 samples if keep_samples else None))
    return BenchReport(rows)


def _time_scores(Q, reps):
    out = []
    for _ in range(reps):
        t0 = time.perf_counter()
        leverage_scores(Q)
        out.append(time.perf_counter() - t0)
    return out


def gaussian_kernel_columns(points, column_indices, sigma: float, gamma: float = 1.0) -> np.ndarray:
    """Columns ``gamma * exp(-|x_i - x_c|^2 / sigma^2)`` of the Gaussian kernel matrix."""
    if sigma <= 0 or gamma <= 0:
        raise ValueError("sigma and gamma must be positive")
    X = np.asarray(points, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    C = X[np.asarray(column_indices)]
    d2 = (np.einsum("ij,ij->i", X, X)[:, None] + np.einsum("ij,ij->i", C, C)[None, :]
          - 2.0 * X @ C.T)
    np.maximum(d2, 0.0, out=d2)
    return gamma * np.exp(-d2 / sigma**2)


def gaussian_blobs(n: int, d: int = 2, centers: int = 5, spread: float = 0.5, rng=None) -> np.ndarray:
    """``n`` points scattered around ``centers`` uniformly placed centers in [-5, 5]^d."""
    rng = np.random.default_rng(rng)
    mu = rng.uniform(-5, 5, size=(centers, d))
    return mu[rng.integers(centers, size=n)] + spread * rng.standard_normal((n, d))


@dataclass
class PipelineConfig:
    m: int
    sigma: float = 1.0
    gamma: float = 1.0
    column_factor: int = 5
    points: np.ndarray | None = None
    n: int | None = None
    d: int = 2
    algorithm: str = "rejection"
    cache: bool = False


@dataclass
class PipelineResult:
    indices: np.ndarray
    proposals: int
    timings: dict


def run_pipeline(cfg: PipelineConfig, rng=None) -> PipelineResult:
    """Kernel columns, range finder, then a projection DPP sample.

    ``cfg.column_factor * m`` columns (at most ``n``) are chosen uniformly
    without replacement. Timings are reported for the ``kernel``, ``rrqr``
    and ``sample`` phases.
    """
    rng = np.random.default_rng(rng)
    X = cfg.points
    if X is None:
        if cfg.n is None:
            raise ValueError("either points or n is required")
        X = gaussian_blobs(cfg.n, cfg.d, rng=rng)
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= cfg.m < n:
        raise ValueError(f"need 1 <= m < n, got m={cfg.m}, n={n}")
    c = min(cfg.column_factor * cfg.m, n)
    timings = {}

    t0 = time.perf_counter()
    cols = rng.choice(n, size=c, replace=False)
    A = gaussian_kernel_columns(X, cols, cfg.sigma, cfg.gamma)
    timings["kernel"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    Q = randomized_range_finder(A, cfg.m, rng)
    timings["rrqr"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if cfg.algorithm == "standard":
        tr = sample_standard(Q, rng)
    else:
        tr = sample_rejection(prepare(Q, cache=cfg.cache), rng)
    timings["sample"] = time.perf_counter() - t0
    return PipelineResult(tr.indices, tr.total_proposals, timings)
