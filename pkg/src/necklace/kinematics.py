"""Slowed-down signal propagation, translations, and discrete Weyl transport.

Case A interleaves ``k0`` forward updates with ``l0`` inverse updates.
Case B follows ``k0`` updates with ``l0`` translations that move the even
sublattice (right-movers) two sites left and the odd sublattice
(left-movers) two sites right.  Each translation occupies one row of the
trace, so a cycle always spans ``k0 + l0`` rows and the net displacement
per cycle is ``k0 - l0`` sublattice sites in both cases.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .chain import ChainState, update_permutation
from .errors import ValidationError
from .hilbert import basis_permutation, extract_hamiltonian, generator
from .perm import Permutation, compose, from_transpositions, inverse, power
from .trace import SpacetimeTrace


class Case(enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class SlowdownSpec:
    k0: int
    l0: int
    mode: Case = Case.A
    T: float = 1.0
    D: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Case(self.mode))
        if self.k0 < 1 or self.l0 < 0:
            raise ValidationError("need k0 >= 1 and l0 >= 0")
        if self.mode is Case.B and self.l0 > self.k0:
            raise ValidationError("Case B requires l0 <= k0")

    @property
    def cycle_len(self) -> int:
        return self.k0 + self.l0

    @property
    def T_eff(self) -> float:
        return self.cycle_len * self.T

    @property
    def velocity(self) -> Fraction:
        return Fraction(self.k0 - self.l0, self.k0 + self.l0)


# --- translations ---------------------------------------------------------------


def translation_left_transpositions(S: int) -> list[tuple[int, int]]:
    """0-based ``P(2j+2, 2j)`` for j = 1..S-1, lowest index first."""
    return [(2 * j - 1, 2 * j + 1) for j in range(1, S)]


def translation_right_transpositions(S: int) -> list[tuple[int, int]]:
    """0-based ``P(2j-1, 2j+1)`` for j = S-1..1, highest index first."""
    return [(2 * j - 2, 2 * j) for j in reversed(range(1, S))]


def translation_left(S: int) -> Permutation:
    """Even-site contents shift two sites left (site 2 wraps to 2S); odd sites fixed."""
    if S < 2:
        raise ValidationError("translations need S >= 2")
    return from_transpositions(2 * S, translation_left_transpositions(S))


def translation_right(S: int) -> Permutation:
    """Odd-site contents shift two sites right (site 2S-1 wraps to 1); even sites fixed."""
    if S < 2:
        raise ValidationError("translations need S >= 2")
    return from_transpositions(2 * S, translation_right_transpositions(S))


def theta_generator(S: int, D: float = 1.0, side: str = "L"):
    """Orbit-wise ``Theta`` with ``exp(-i Theta D) = lift(T(2))`` on basis states (sparse)."""
    t = translation_left(S) if side.upper() == "L" else translation_right(S)
    return generator(basis_permutation(t), D)


# --- effective generators ---------------------------------------------------------


def case_a_order(spec: SlowdownSpec) -> list[int]:
    """Default cycle: ``k0`` forward steps then ``l0`` reversed ones (+1 / -1)."""
    return [1] * spec.k0 + [-1] * spec.l0


def _check_order(spec: SlowdownSpec, order: Sequence[int]) -> list[int]:
    order = [int(o) for o in order]
    if sorted(order) != sorted(case_a_order(spec)):
        raise ValidationError("order must contain k0 entries +1 and l0 entries -1")
    return order


def cycle_permutation(S: int, spec: SlowdownSpec, order: Sequence[int] | None = None) -> Permutation:
    """Site permutation of one full cycle."""
    u = update_permutation(S)
    if spec.mode is Case.A:
        order = case_a_order(spec) if order is None else _check_order(spec, order)
        result = Permutation.identity(2 * S)
        for o in order:
            result = compose(u if o > 0 else inverse(u), result)
        return result
    shift = compose(translation_left(S), translation_right(S))
    return compose(power(shift, spec.l0), power(u, spec.k0))


def effective_hamiltonian(spec: SlowdownSpec, S: int):
    """Case A: ``H (k0-l0)/(k0+l0)`` in inverse time, for use with ``T_eff``.
    Case B: dimensionless ``k0 H T + l0 (Theta_L + Theta_R) D``.

    Returned sparse; ``exp(-i G T_eff)`` (A) or ``exp(-i G)`` (B) reproduces
    the lifted cycle permutation.
    """
    h = extract_hamiltonian(S, spec.T)
    if spec.mode is Case.A:
        return h * ((spec.k0 - spec.l0) / (spec.k0 + spec.l0))
    if S < 2:
        raise ValidationError("Case B needs S >= 2")
    theta = theta_generator(S, spec.D, "L") + theta_generator(S, spec.D, "R")
    return spec.k0 * spec.T * h + spec.l0 * spec.D * theta


# --- evolution -------------------------------------------------------------------


def evolve_slowdown(
    state: ChainState, spec: SlowdownSpec, cycles: int, order: Sequence[int] | None = None
) -> SpacetimeTrace:
    if cycles < 0:
        raise ValidationError("cycles must be >= 0")
    S = state.S
    u = update_permutation(S)
    if spec.mode is Case.A:
        order = case_a_order(spec) if order is None else _check_order(spec, order)
        ops = [(u, "U") if o > 0 else (inverse(u), "U-") for o in order]
    else:
        if spec.l0 and S < 2:
            raise ValidationError("Case B translations need S >= 2")
        shift = compose(translation_left(S), translation_right(S)) if spec.l0 else None
        ops = [(u, "U")] * spec.k0 + [(shift, "T")] * spec.l0
    n_rows = cycles * spec.cycle_len + 1
    rows = np.empty((n_rows, 2 * S), dtype=np.int64)
    rows[0] = state.spins
    events = ["init"]
    for n in range(1, n_rows):
        p, label = ops[(n - 1) % spec.cycle_len]
        rows[n] = p.apply_array(rows[n - 1])
        events.append(label)
    meta = {"case": spec.mode.value, "k0": spec.k0, "l0": spec.l0}
    return SpacetimeTrace(S=S, rows=rows, dt=spec.T, meta=meta, events=tuple(events))


def cycle_rows(trace: SpacetimeTrace) -> np.ndarray:
    """Rows at whole-cycle boundaries."""
    try:
        cyc = int(trace.meta["k0"]) + int(trace.meta["l0"])
    except KeyError:
        raise ValidationError("trace carries no k0/l0 metadata") from None
    if trace.meta.get("sampled") in (True, "True", "1"):
        return trace.rows
    if trace.steps % cyc:
        raise ValidationError(f"trace of {trace.steps} steps is not aligned to cycles of {cyc}")
    return trace.rows[::cyc]


def defect_sites(row: np.ndarray, background: int) -> list[int]:
    return [int(k) + 1 for k in np.flatnonzero(row != background)]


def measure_velocity(trace: SpacetimeTrace, background: int = 1) -> Fraction:
    """Signed single-defect velocity in sublattice sites per step (rightward positive)."""
    rows = cycle_rows(trace)
    cyc = int(trace.meta["k0"]) + int(trace.meta["l0"])
    S = trace.S
    positions = []
    for row in rows:
        sites = defect_sites(row, background)
        if len(sites) != 1:
            raise ValidationError(f"expected exactly one defect, found {len(sites)}")
        positions.append(sites[0])
    if len(positions) < 2:
        raise ValidationError("need at least one full cycle")
    parity = positions[0] % 2
    disp = set()
    for a, b in zip(positions, positions[1:]):
        if b % 2 != parity:
            raise ValidationError("defect changed sublattice")
        d = ((b - a) // 2) % S
        if d > S // 2:
            d -= S
        disp.add(d)
    if len(disp) != 1:
        raise ValidationError(f"displacement per cycle not constant: {sorted(disp)}")
    return Fraction(disp.pop(), cyc)


# --- discrete Weyl transport ----------------------------------------------------------


@dataclass(frozen=True)
class WeylFields:
    Splus: np.ndarray
    Sminus: np.ndarray

    @classmethod
    def from_movers(cls, left, right) -> "WeylFields":
        left = np.asarray(left, dtype=np.int64)
        right = np.asarray(right, dtype=np.int64)
        return cls(left + right, left - right)

    def movers(self) -> tuple[np.ndarray, np.ndarray]:
        # S+ and S- share parity, so the halves are exact integers
        return (self.Splus + self.Sminus) // 2, (self.Splus - self.Sminus) // 2


def check_weyl_combination(trace: SpacetimeTrace) -> int:
    """Max integer residual of the per-cycle transport equations.

    With ``d = k0 - l0``: ``L'(j) = L(j + d)``, ``R'(j) = R(j - d)``, and the
    corresponding relations for ``S+ = L + R`` and ``S- = L - R``.
    """
    rows = cycle_rows(trace)
    d = int(trace.meta["k0"]) - int(trace.meta["l0"])
    worst = 0
    for now, nxt in zip(rows, rows[1:]):
        left, right = now[0::2], now[1::2]
        moved_l = np.roll(left, -d)   # moved_l[j] = left[j + d]
        moved_r = np.roll(right, d)   # moved_r[j] = right[j - d]
        f_next = WeylFields.from_movers(nxt[0::2], nxt[1::2])
        res = [
            nxt[0::2] - moved_l,
            nxt[1::2] - moved_r,
            f_next.Splus - (moved_l + moved_r),
            f_next.Sminus - (moved_l - moved_r),
        ]
        worst = max(worst, max(int(np.abs(r).max()) for r in res))
    return worst


def transport_symbol(kappa_index: int, n: int, side: str = "L") -> complex:
    """One-cycle transfer factor of the rescaled transport on an ``n``-site ring.

    Applies the shift to the plane wave ``exp(i kappa j)``, ``kappa = 2 pi
    kappa_index / n``, and returns the ratio; exactly ``exp(+i kappa)`` for
    left-movers and ``exp(-i kappa)`` for right-movers.
    """
    j = np.arange(n)
    kappa = 2 * np.pi * kappa_index / n
    wave = np.exp(1j * kappa * j)
    moved = np.roll(wave, -1 if side.upper() == "L" else 1)
    ratios = moved / wave
    if np.ptp(ratios.real) > 1e-12 or np.ptp(ratios.imag) > 1e-12:
        raise ValidationError("plane wave is not an eigenvector of the transfer map")
    return complex(ratios[0])


def reverse_numbering(trace: SpacetimeTrace) -> SpacetimeTrace:
    """Renumber sites right to left (site k -> 2S + 1 - k); swaps the mover roles."""
    return SpacetimeTrace(
        S=trace.S, rows=trace.rows[:, ::-1], M=trace.M, dt=trace.dt, meta=dict(trace.meta),
        events=trace.events,
    )


def basis_cycle_permutation(S: int, spec: SlowdownSpec, order=None) -> Permutation:
    return basis_permutation(cycle_permutation(S, spec, order))

