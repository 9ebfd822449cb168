"""Exact permutation algebra on finite index sets.

A :class:`Permutation` maps index ``i`` to ``map[i]``.  Acting on the
*contents* of positions it relocates whatever sits at ``i`` to ``map[i]``,
so applying ``q`` and then ``p`` is ``compose(p, q)``.

Operator products written in physics notation (rightmost factor acts first)
are converted to application order by the caller, never here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ValidationError


class Transposition(NamedTuple):
    i: int
    j: int


def _as_transposition(t) -> Transposition:
    i, j = (int(x) for x in t)
    if i == j:
        raise ValidationError(f"transposition needs two distinct indices, got ({i}, {j})")
    return Transposition(i, j)


class Permutation:
    """Immutable bijection of ``range(size)``."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Iterable[int] | np.ndarray, *, check: bool = True):
        arr = np.array(mapping, dtype=np.int64).reshape(-1)
        if check:
            n = arr.size
            if n == 0:
                raise ValidationError("permutation size must be positive")
            if arr.min() < 0 or arr.max() >= n or np.bincount(arr, minlength=n).max() != 1:
                raise ValidationError("mapping is not a bijection of range(size)")
        arr.setflags(write=False)
        self._map = arr

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(np.arange(size, dtype=np.int64), check=False)

    @property
    def map(self) -> np.ndarray:
        return self._map

    @property
    def size(self) -> int:
        return int(self._map.size)

    def __call__(self, i: int) -> int:
        return int(self._map[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.size == other.size and bool(np.array_equal(self._map, other._map))

    def __hash__(self) -> int:
        return hash(self._map.tobytes())

    def __repr__(self) -> str:
        if self.size <= 16:
            return f"Permutation({self._map.tolist()})"
        return f"Permutation(size={self.size})"

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, n: int) -> "Permutation":
        return power(self, n)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._map, np.arange(self.size)))

    def inverse(self) -> "Permutation":
        return inverse(self)

    def order(self) -> int:
        return order(self)

    def apply(self, contents: Sequence) -> list:
        """Relocate ``contents[i]`` to position ``map[i]``."""
        if len(contents) != self.size:
            raise ValidationError(f"expected {self.size} items, got {len(contents)}")
        out = [None] * self.size
        for i, target in enumerate(self._map.tolist()):
            out[target] = contents[i]
        return out

    def apply_array(self, contents: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`apply` along the last axis."""
        contents = np.asarray(contents)
        out = np.empty_like(contents)
        out[..., self._map] = contents
        return out


def from_transpositions(size: int, seq: Iterable) -> Permutation:
    """Swaps applied to position contents, first element of ``seq`` first."""
    if size < 1:
        raise ValidationError("size must be positive")
    # arr[k]: current position of the item that started at k; where[pos]: its inverse
    arr = np.arange(size, dtype=np.int64)
    where = np.arange(size, dtype=np.int64)
    for t in seq:
        i, j = _as_transposition(t)
        for idx in (i, j):
            if not 0 <= idx < size:
                raise ValidationError(f"transposition index {idx} out of range for size {size}")
        a, b = where[i], where[j]
        where[i], where[j] = b, a
        arr[a], arr[b] = j, i
    return Permutation(arr, check=False)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``q`` first, then ``p``."""
    if p.size != q.size:
        raise ValidationError(f"size mismatch: {p.size} vs {q.size}")
    return Permutation(p.map[q.map], check=False)


def inverse(p: Permutation) -> Permutation:
    inv = np.empty_like(p.map)
    inv[p.map] = np.arange(p.size)
    return Permutation(inv, check=False)


def power(p: Permutation, n: int) -> Permutation:
    n = int(n)
    if n < 0:
        return power(inverse(p), -n)
    result = Permutation.identity(p.size)
    base = p
    while n:
        if n & 1:
            result = compose(base, result)
        base = compose(base, base)
        n >>= 1
    return result


@dataclass(frozen=True)
class CycleDecomposition:
    """Cycles of a permutation; each cycle lists ``[a, p(a), p(p(a)), ...]``.

    Cycles start at their smallest element and are sorted by it.  Fixed
    points appear as singletons.
    """

    size: int
    cycles: tuple[tuple[int, ...], ...]

    @property
    def lengths(self) -> list[int]:
        return [len(c) for c in self.cycles]

    def histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for n in self.lengths:
            hist[n] = hist.get(n, 0) + 1
        return dict(sorted(hist.items()))

    def to_permutation(self) -> Permutation:
        arr = np.empty(self.size, dtype=np.int64)
        for cyc in self.cycles:
            for k, a in enumerate(cyc):
                arr[a] = cyc[(k + 1) % len(cyc)]
        return Permutation(arr)


def cycle_decompose(p: Permutation) -> CycleDecomposition:
    m = p.map.tolist()
    seen = bytearray(p.size)
    cycles = []
    for start in range(p.size):
        if seen[start]:
            continue
        cyc = []
        a = start
        while not seen[a]:
            seen[a] = 1
            cyc.append(a)
            a = m[a]
        cycles.append(tuple(cyc))
    return CycleDecomposition(p.size, tuple(cycles))


def order(p: Permutation) -> int:
    return reduce(math.lcm, cycle_decompose(p).lengths, 1)
