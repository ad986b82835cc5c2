"""Exact samplers for projection DPPs with kernel ``K = Q Q^T``.

Two algorithms are provided:

* :func:`sample_standard`, the classical sequential sampler. At each step it
  draws from the full conditional distribution and then updates every entry
  of it, for a cost of O(nm) per step and O(nm^2) overall.
* :func:`sample_rejection`, which keeps the leverage scores as a fixed
  proposal (drawn in O(1) through an alias table) and accepts a proposal
  ``x`` with probability equal to its current conditional mass divided by
  its leverage score. After the O(nm) preprocessing a sample costs
  O(m^3 log m) in expectation.

Indices are 0-based throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .alias import AliasTable, build_alias
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NumericalUnderflow, ProposalBudgetExceeded
from .linalg import GramSchmidtBasis, check_orthonormal

__all__ = [
    "LeverageScores",
    "SampleTrace",
    "SamplerOptions",
    "PreparedSampler",
    "ProposalCache",
    "RejectionState",
    "leverage_scores",
    "prepare",
    "sample_standard",
    "sample_rejection",
    "sample_repeated",
    "acceptance_ratio",
    "proposal_budget",
    "tail_bound",
]


@dataclass(frozen=True)
class LeverageScores:
    values: np.ndarray
    total: float


@dataclass
class SampleTrace:
    """One realization plus the proposal counts that produced it.

    ``indices`` is ordered by acceptance step; the DPP sample itself is the
    unordered set (see :meth:`as_set`). ``proposals_per_step`` is all ones
    for the standard sampler.
    """

    indices: np.ndarray
    proposals_per_step: np.ndarray
    seed: int | None = None
    mass_history: np.ndarray | None = field(default=None, repr=False)

    @property
    def total_proposals(self) -> int:
        return int(self.proposals_per_step.sum())

    def as_set(self) -> frozenset:
        return frozenset(int(i) for i in self.indices)

    def as_tuple(self) -> tuple:
        return tuple(sorted(int(i) for i in self.indices))


@dataclass(frozen=True)
class SamplerOptions:
    cache: bool = False
    tol: Tolerances = DEFAULT_TOLERANCES


@dataclass(frozen=True)
class PreparedSampler:
    """Everything the rejection sampler needs that does not depend on the draw.

    Build with :func:`prepare`; the object is never mutated afterwards and
    can be shared between threads as long as each caller brings its own RNG.
    """

    basis: np.ndarray
    scores: LeverageScores
    alias: AliasTable
    options: SamplerOptions = SamplerOptions()

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def m(self) -> int:
        return self.basis.shape[1]


class ProposalCache:
    """Per-item memo of the last conditional mass evaluated.

    ``last_step[i] = k`` means ``last_value[i]`` holds the mass of ``i``
    after removing the first ``k - 1`` Gram-Schmidt directions; ``0`` means
    unset.
    """

    __slots__ = ("last_step", "last_value")

    def __init__(self, n: int):
        self.last_step = np.zeros(n, dtype=np.intp)
        self.last_value = np.zeros(n)


def leverage_scores(Q) -> LeverageScores:
    """Squared row norms of ``Q``, i.e. the diagonal of ``Q Q^T``."""
    Q = np.asarray(Q, dtype=np.float64)
    values = np.einsum("ij,ij->i", Q, Q)
    return LeverageScores(values, float(values.sum()))


def prepare(Q, cache: bool = False, tol: Tolerances = DEFAULT_TOLERANCES,
            scores: LeverageScores | None = None) -> PreparedSampler:
    """Validate ``Q``, compute its leverage scores and their alias table."""
    Q = check_orthonormal(Q, tol)
    if scores is None:
        scores = leverage_scores(Q)
    return PreparedSampler(Q, scores, build_alias(scores.values), SamplerOptions(cache, tol))


def _as_rng(rng):
    seed = rng if isinstance(rng, (int, np.integer)) else None
    return np.random.default_rng(rng), (None if seed is None else int(seed))


def tail_bound(m: int, delta: float) -> float:
    """High-probability bound ``2 m ln m + 3 m ln(1/delta)`` on total proposals."""
    return 2.0 * m * math.log(m) + 3.0 * m * math.log(1.0 / delta) if m > 0 else 0.0


def proposal_budget(m: int, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    """Hard cap on proposals per sample; exceeding it signals a numerical fault."""
    return max(int(math.ceil(tol.budget_factor * tail_bound(m, tol.budget_delta))), 1)


def sample_standard(Q, rng=None, record_mass: bool = False,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> SampleTrace:
    """Classical O(nm^2) sampler.

    At step ``t`` an item is drawn from the unnormalized masses by an
    inverse-CDF scan scaled by their running total, then every mass is
    reduced by its squared projection on the new Gram-Schmidt direction.

    Parameters
    ----------
    Q : array_like, shape (n, m)
        Orthonormal basis of the kernel's range.
    rng : int, Generator or None
    record_mass : bool
        Keep the masses seen at every step in ``trace.mass_history`` (shape
        ``(m, n)``); used for invariant checks.
    """
    Q = check_orthonormal(Q, tol)
    rng, seed = _as_rng(rng)
    n, m = Q.shape
    mass = np.einsum("ij,ij->i", Q, Q)
    S = GramSchmidtBasis(m, tol)
    indices = np.empty(m, dtype=np.intp)
    history = np.empty((m, n)) if record_mass else None
    for t in range(m):
        if record_mass:
            history[t] = mass
        cdf = np.cumsum(mass)
        total = cdf[-1]
        if abs(total - (m - t)) > tol.mass_drift * m:
            raise NumericalUnderflow(f"step {t + 1}: mass {total!r}, expected {m - t}")
        x = int(np.searchsorted(cdf, rng.random() * total, side="right"))
        x = min(x, n - 1)
        indices[t] = x
        s = S.append(Q[x])
        v = Q @ s
        mass -= v * v
        np.maximum(mass, 0.0, out=mass)
    return SampleTrace(indices, np.ones(m, dtype=np.intp), seed, history)


class RejectionState:
    """Mutable per-sample state of the rejection sampler.

    Holds the Gram-Schmidt basis of the rows accepted so far and, when
    caching is enabled, the memo of previous mass evaluations. ``step`` is
    the 1-based index of the item currently being drawn.
    """

    def __init__(self, prep: PreparedSampler):
        self.prep = prep
        self.Q = prep.basis
        self.leverage = prep.scores.values
        self.basis = GramSchmidtBasis(prep.m, prep.options.tol)
        self.cache = ProposalCache(prep.n) if prep.options.cache else None
        self.accepted: list[int] = []

    @property
    def step(self) -> int:
        return self.basis.size + 1

    def conditional_mass(self, x: int) -> float:
        """Unnormalized conditional mass of ``x`` at the current step."""
        t = self.basis.size
        rows = self.basis.rows
        q = self.Q[x]
        cache = self.cache
        if cache is None or cache.last_step[x] == 0:
            c = rows[:t] @ q
            val = self.leverage[x] - c @ c
        else:
            k = cache.last_step[x] - 1
            c = rows[k:t] @ q
            val = cache.last_value[x] - c @ c
        if cache is not None:
            cache.last_step[x] = t + 1
            cache.last_value[x] = val
        return float(val)

    def raw_ratio(self, x: int) -> float:
        return self.conditional_mass(x) / self.leverage[x]

    def accept(self, x: int) -> None:
        self.basis.append(self.Q[x])
        self.accepted.append(int(x))


def acceptance_ratio(state: RejectionState, x: int) -> float:
    """Probability of keeping proposal ``x`` at the state's current step, clamped to [0, 1]."""
    assert state.leverage[x] > 0, "proposal with zero leverage"
    r = state.raw_ratio(x)
    return 0.0 if r < 0.0 else (1.0 if r > 1.0 else r)


def _run_rejection(state: RejectionState, next_proposal, uniform, budget: int) -> tuple[np.ndarray, bool]:
    """Drive ``state`` to ``m`` acceptances.

    ``next_proposal()`` returns an index or ``None`` when the stream is
    exhausted; ``uniform()`` supplies the acceptance coin. Returns the
    per-step proposal counts and whether all ``m`` items were accepted.
    """
    m = state.prep.m
    counts = [0] * m
    used = 0
    Q, leverage, rows = state.Q, state.leverage, state.basis.rows
    cached = state.cache is not None
    for t in range(m):
        St = rows[:t]
        while True:
            x = next_proposal()
            if x is None:
                return np.array(counts, dtype=np.intp), False
            counts[t] += 1
            used += 1
            if used > budget:
                raise ProposalBudgetExceeded(f"more than {budget} proposals for m={m}")
            if t == 0:
                break
            if cached:
                r = acceptance_ratio(state, x)
            else:
                # inlined acceptance_ratio(state, x) without the cache
                c = St @ Q[x]
                r = 1.0 - c.dot(c) / leverage[x]
            if uniform() < r:
                break
        state.accept(x)
    return np.array(counts, dtype=np.intp), True


class _Stream:
    """Buffered alias draws and uniforms so the inner loop avoids per-call RNG overhead."""

    def __init__(self, alias: AliasTable, rng: np.random.Generator, block: int):
        self.alias = alias
        self.rng = rng
        self.block = block
        self._xs: list = []
        self._us: list = []

    def proposal(self):
        if not self._xs:
            a, rng = self.alias, self.rng
            cols = rng.integers(a.n, size=self.block)
            coins = rng.random(self.block)
            self._xs = np.where(coins < a.prob[cols], cols, a.alias[cols])[::-1].tolist()
        return self._xs.pop()

    def uniform(self):
        if not self._us:
            self._us = self.rng.random(self.block).tolist()
        return self._us.pop()


def sample_rejection(prep: PreparedSampler, rng=None) -> SampleTrace:
    """Draw one sample with the rejection sampler.

    Step ``t`` proposes items from the leverage scores until one is accepted;
    the number of proposals ``R_t`` is geometric with success probability
    ``(m - t + 1) / m``.
    """
    rng, seed = _as_rng(rng)
    return _sample_rejection(prep, rng, seed)


def _sample_rejection(prep, rng, seed):
    m = prep.m
    state = RejectionState(prep)
    stream = _Stream(prep.alias, rng, block=max(16, 2 * m))
    budget = proposal_budget(m, prep.options.tol)
    counts, _ = _run_rejection(state, stream.proposal, stream.uniform, budget)
    return SampleTrace(np.array(state.accepted, dtype=np.intp), counts, seed)


def sample_repeated(prep: PreparedSampler, count: int, rng=None) -> list[SampleTrace]:
    """``count`` independent samples sharing one preprocessing pass."""
    rng, seed = _as_rng(rng)
    return [_sample_rejection(prep, rng, seed) for _ in range(count)]
