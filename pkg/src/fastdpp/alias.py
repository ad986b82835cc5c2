"""Walker's alias method: O(n) table construction, O(1) draws."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidWeights

__all__ = ["AliasTable", "build_alias", "alias_draw", "alias_draw_many"]


@dataclass(frozen=True)
class AliasTable:
    """Column ``i`` keeps item ``i`` with probability ``prob[i]`` and
    otherwise yields ``alias[i]``."""

    prob: np.ndarray
    alias: np.ndarray

    @property
    def n(self) -> int:
        return len(self.prob)

    def probabilities(self) -> np.ndarray:
        """Exact draw distribution implied by the table."""
        n = self.n
        out = np.asarray(self.prob, dtype=np.float64).copy()
        np.add.at(out, self.alias, 1.0 - self.prob)
        return out / n


def build_alias(weights) -> AliasTable:
    """Build an alias table in O(n) with vectorized sweeping.

    Items are split into light (scaled weight below 1) and heavy ones. Heavy
    items are filled in order: each light item takes the heavy item that is
    current when it arrives as its alias, and a heavy item whose surplus runs
    out turns light itself and is topped up by the next heavy item. With
    cumulative deficits of the light items and cumulative surpluses of the
    heavy ones, both assignments reduce to ``searchsorted``. Zero weights are
    allowed and are never drawn.
    """
    w = np.asarray(weights, dtype=np.float64).ravel()
    if w.size == 0:
        raise InvalidWeights("empty weight vector")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InvalidWeights("weights must be finite and nonnegative")
    total = w.sum()
    if total <= 0:
        raise InvalidWeights("at least one weight must be positive")
    n = w.size
    scaled = w / total * n
    prob = np.ones(n)
    alias = np.arange(n, dtype=np.intp)
    light = np.flatnonzero(scaled < 1.0)
    heavy = np.flatnonzero(scaled >= 1.0)
    if light.size and heavy.size:
        deficit = 1.0 - scaled[light]
        D = np.cumsum(deficit)
        E = np.cumsum(scaled[heavy] - 1.0)
        # heavy item current when each light item arrives (rounding may overrun the last)
        owner = np.minimum(np.searchsorted(E, D - deficit, side="left"), heavy.size - 1)
        prob[light] = scaled[light]
        alias[light] = heavy[owner]
        # the light item whose deficit exhausts each heavy item's surplus
        at = np.searchsorted(D, E[:-1], side="right")
        k = np.flatnonzero(at < light.size)
        prob[heavy[k]] = np.clip(1.0 - (D[at[k]] - E[k]), 0.0, 1.0)
        alias[heavy[k]] = heavy[k + 1]
    return AliasTable(prob, alias)


def alias_draw(table: AliasTable, rng: np.random.Generator) -> int:
    """One draw: a uniform column index, then a uniform real for the coin flip."""
    i = int(rng.integers(table.n))
    if rng.random() < table.prob[i]:
        return i
    return int(table.alias[i])


def alias_draw_many(table: AliasTable, size: int, rng: np.random.Generator) -> np.ndarray:
    cols = rng.integers(table.n, size=size)
    coins = rng.random(size)
    return np.where(coins < table.prob[cols], cols, table.alias[cols])
