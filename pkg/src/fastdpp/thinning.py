"""Thinning an i.i.d. leverage-score sample down to a projection DPP realization.

:func:`thin` runs the rejection sampler but takes its proposals from a
pre-drawn pool instead of the alias table. It succeeds when all ``m``
items are accepted before the pool runs out, which for pools of size
``2 m ln m + 3 m ln(1/delta)`` happens with probability at least
``1 - delta``.

The stratified DPP (one uniformly chosen item from each of ``m`` equal
segments) shows the ``m log m`` pool size cannot be improved in general:
the pool must hit every segment, which is the coupon collector problem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alias import alias_draw_many, build_alias
from .errors import NotDivisible
from .projection import (
    LeverageScores,
    RejectionState,
    _run_rejection,
    prepare,
    proposal_budget,
    tail_bound,
)

__all__ = [
    "ThinningResult",
    "StratifiedSpec",
    "iid_leverage_sample",
    "thin",
    "thinning_pool_size",
    "stratified_basis",
    "coupon_collector_experiment",
    "coupon_collector_bound",
    "thinning_success_rate",
]


@dataclass(frozen=True)
class ThinningResult:
    success: bool
    output: np.ndarray | None
    consumed: int


@dataclass(frozen=True)
class StratifiedSpec:
    n: int
    m: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1 or self.n % self.m:
            raise NotDivisible(f"m={self.m} does not divide n={self.n}")

    def segment(self, i):
        """0-based segment of 0-based index ``i`` (segments are contiguous runs of n/m items)."""
        return np.asarray(i) // (self.n // self.m)


def thinning_pool_size(m: int, delta: float) -> int:
    return int(math.ceil(tail_bound(m, delta)))


def iid_leverage_sample(scores: LeverageScores, l: int, rng=None) -> np.ndarray:
    """``l`` draws with replacement, item ``i`` having probability ``scores[i] / m``."""
    rng = np.random.default_rng(rng)
    if l == 0:
        return np.zeros(0, dtype=np.intp)
    return alias_draw_many(build_alias(scores.values), l, rng).astype(np.intp)


def thin(Q, Y, rng=None, prep=None) -> ThinningResult:
    """Extract a DPP(Q Q^T) realization from the pool ``Y`` if possible.

    ``Y`` is shuffled once and consumed in order as the proposal stream of
    the rejection sampler. Pass ``prep`` to reuse an already prepared basis.
    """
    rng = np.random.default_rng(rng)
    if prep is None:
        prep = prepare(Q)
    pool = rng.permutation(np.asarray(Y, dtype=np.intp)).tolist()
    pool.reverse()
    state = RejectionState(prep)

    def next_proposal():
        return pool.pop() if pool else None

    budget = max(len(pool), proposal_budget(prep.m, prep.options.tol))
    counts, ok = _run_rejection(state, next_proposal, rng.random, budget)
    consumed = int(counts.sum())
    out = np.array(state.accepted, dtype=np.intp) if ok else None
    return ThinningResult(ok, out, consumed)


def thinning_success_rate(Q, l: int, trials: int, rng=None) -> float:
    """Fraction of ``trials`` pools of size ``l`` that :func:`thin` turns into a sample."""
    rng = np.random.default_rng(rng)
    prep = prepare(Q)
    hits = 0
    for _ in range(trials):
        Y = alias_draw_many(prep.alias, l, rng)
        hits += thin(Q, Y, rng, prep=prep).success
    return hits / trials


def stratified_basis(spec: StratifiedSpec) -> np.ndarray:
    """Columns are the unit-norm indicators of the ``m`` segments."""
    n, m = spec.n, spec.m
    E = np.zeros((n, m))
    E[np.arange(n), spec.segment(np.arange(n))] = math.sqrt(m / n)
    return E


def coupon_collector_bound(m: int, l: int) -> float:
    """Upper bound ``exp(l/m) / (m + 1)`` on P(T < l)."""
    return math.exp(l / m) / (m + 1)


def coupon_collector_experiment(m: int, l: int, trials: int, rng=None,
                                method: str = "urns") -> float:
    """Estimate P(T <= l): ``l`` uniform throws into ``m`` urns leave none empty.

    ``method="thinning"`` runs :func:`thin` on the stratified DPP with a
    uniform pool instead of counting urns directly; both estimate the same
    probability.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng)
    if method == "thinning":
        E = stratified_basis(StratifiedSpec(2 * m, m))
        return thinning_success_rate(E, l, trials, rng)
    if method != "urns":
        raise ValueError(f"unknown method {method!r}")
    hits = 0
    chunk = max(1, min(trials, 2_000_000 // max(l, 1)))
    done = 0
    while done < trials:
        b = min(chunk, trials - done)
        throws = rng.integers(m, size=(b, l)) + (m * np.arange(b))[:, None]
        filled = np.bincount(throws.ravel(), minlength=b * m).reshape(b, m)
        hits += int(np.count_nonzero((filled > 0).all(axis=1)))
        done += b
    return hits / trials
