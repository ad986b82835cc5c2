"""Numerical tolerances shared across modules.

Every function that applies one of these thresholds also accepts a
``tol`` argument, so a caller can swap in a modified copy::

    from dataclasses import replace
    loose = replace(DEFAULT_TOLERANCES, gram_schmidt_degenerate=1e-10)
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    orthonormal: float = 1e-10
    symmetric: float = 1e-8
    rank_ratio: float = 1e-10
    gram_schmidt_degenerate: float = 1e-12
    gram_schmidt_reorth: float = 0.5
    mass_drift: float = 1e-6
    psd: float = 1e-8
    zero_eigenvalue: float = 1e-12
    budget_delta: float = 1e-12
    budget_factor: float = 10.0


DEFAULT_TOLERANCES = Tolerances()
