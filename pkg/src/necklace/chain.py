"""Ising exchange chain: 2S two-valued spins on a ring.

Sites are 1-based in the physics and 0-based in arrays (``spins[k]`` is
site ``k + 1``).  One update applies the even-pair exchanges
``P(2l, 2l+1)`` (wrapping ``P(2S, 2S+1) = P(2S, 1)``) and then the odd-pair
exchanges ``P(2k-1, 2k)``.  Spins on odd sites then travel two sites to the
left per update, spins on even sites two sites to the right.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .perm import Permutation, Transposition, from_transpositions
from .trace import SpacetimeTrace


@dataclass(frozen=True)
class ChainState:
    spins: tuple[int, ...]

    def __post_init__(self):
        spins = tuple(int(s) for s in self.spins)
        if not spins or len(spins) % 2:
            raise ValidationError("a chain needs an even, positive number of sites")
        if any(s not in (-1, 1) for s in spins):
            raise ValidationError("Ising spins must be +1 or -1")
        object.__setattr__(self, "spins", spins)

    @property
    def S(self) -> int:
        return len(self.spins) // 2

    @classmethod
    def uniform(cls, S: int, value: int = 1) -> "ChainState":
        return cls((value,) * (2 * S))

    @classmethod
    def with_defect(cls, S: int, site: int, background: int = 1) -> "ChainState":
        """Uniform background with the opposite spin at 1-based ``site``."""
        if not 1 <= site <= 2 * S:
            raise ValidationError(f"site {site} outside 1..{2 * S}")
        spins = [background] * (2 * S)
        spins[site - 1] = -background
        return cls(tuple(spins))

    @classmethod
    def random(cls, S: int, rng: np.random.Generator) -> "ChainState":
        return cls(tuple(rng.choice((-1, 1), size=2 * S).tolist()))


def even_pairs(S: int) -> list[Transposition]:
    """0-based ``P(2l, 2l+1)``, l = 1..S, including the wrap pair."""
    return [Transposition(2 * l - 1, (2 * l) % (2 * S)) for l in range(1, S + 1)]


def odd_pairs(S: int) -> list[Transposition]:
    """0-based ``P(2k-1, 2k)``, k = 1..S."""
    return [Transposition(2 * k - 2, 2 * k - 1) for k in range(1, S + 1)]


def update_transpositions(S: int) -> list[Transposition]:
    """Exchanges of one update, in application order."""
    if S < 1:
        raise ValidationError("S must be positive")
    return even_pairs(S) + odd_pairs(S)


@lru_cache(maxsize=128)
def update_permutation(S: int) -> Permutation:
    return from_transpositions(2 * S, update_transpositions(S))


def step(state: ChainState, p: Permutation | None = None) -> ChainState:
    p = update_permutation(state.S) if p is None else p
    return ChainState(tuple(p.apply(state.spins)))


def evolve(state: ChainState, steps: int) -> SpacetimeTrace:
    if steps < 0:
        raise ValidationError("steps must be >= 0")
    p = update_permutation(state.S)
    rows = np.empty((steps + 1, 2 * state.S), dtype=np.int64)
    rows[0] = state.spins
    for n in range(steps):
        rows[n + 1] = p.apply_array(rows[n])
    return SpacetimeTrace(S=state.S, rows=rows, meta={"op": "U"})


def movers(state: ChainState | Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(left, right)``: spins on sites 1, 3, 5, ... and on sites 2, 4, 6, ..."""
    spins = state.spins if isinstance(state, ChainState) else tuple(state)
    return tuple(spins[0::2]), tuple(spins[1::2])


def interleave(left: Sequence[int], right: Sequence[int]) -> tuple[int, ...]:
    if len(left) != len(right):
        raise ValidationError("left and right movers must have equal length")
    out = []
    for a, b in zip(left, right):
        out += [a, b]
    return tuple(out)
