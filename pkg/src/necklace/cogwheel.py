"""The N-state cogwheel: one state hops to the next every time step ``T``.

The standard-basis Hamiltonian used here is the printed closed form

    H[n, n] = pi (N-1) / (N T)
    H[n, m] = pi / (N T) * (-1 + i cot(pi (n-m) / N))

which exponentiates (``exp(-i H T)``) to the shift ``e_m -> e_{m-1}``.
:func:`step_matrix` therefore places its phases on the superdiagonal
(plus the corner entry), so the two always round-trip.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class CogwheelSpec:
    N: int
    T: float = 1.0
    phases: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValidationError(f"N must be a positive integer, got {self.N}")
        if not self.T > 0:
            raise ValidationError(f"T must be positive, got {self.T}")
        phases = tuple(float(p) for p in self.phases) or (0.0,) * self.N
        if len(phases) != self.N:
            raise ValidationError(f"need {self.N} phases, got {len(phases)}")
        object.__setattr__(self, "phases", phases)

    @property
    def zero_phases(self) -> bool:
        return not any(self.phases)


def _require_zero_phases(spec: CogwheelSpec):
    if not spec.zero_phases:
        raise ValidationError("Hamiltonian operations are defined for zero phases only")


def step_matrix(spec: CogwheelSpec) -> np.ndarray:
    """Unitary one-step matrix; ``U^N = exp(i sum(phases)) * 1``."""
    n = spec.N
    u = np.zeros((n, n), dtype=complex)
    for m in range(n):
        u[(m - 1) % n, m] = np.exp(1j * spec.phases[m])
    return u


def eigenvalues_H(spec: CogwheelSpec) -> np.ndarray:
    _require_zero_phases(spec)
    return 2 * np.pi * np.arange(spec.N) / (spec.N * spec.T)


@lru_cache(maxsize=256)
def _h_unit(n: int) -> np.ndarray:
    # T = 1 block; callers divide by T
    k = np.arange(n)
    d = k[:, None] - k[None, :]
    h = np.empty((n, n), dtype=complex)
    off = d != 0
    h[off] = np.pi / n * (-1 + 1j / np.tan(np.pi * d[off] / n))
    h[~off] = np.pi * (n - 1) / n
    # exact Hermiticity: mirror the strictly lower triangle
    iu = np.triu_indices(n, 1)
    h[iu] = h.T[iu].conj()
    h.setflags(write=False)
    return h


def hamiltonian_standard_basis(spec: CogwheelSpec) -> np.ndarray:
    _require_zero_phases(spec)
    return _h_unit(spec.N) / spec.T


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT with kernel ``exp(-2 pi i j k / n) / sqrt(n)``."""
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def hamiltonian_via_dft(spec: CogwheelSpec) -> np.ndarray:
    """Conjugate the diagonal spectrum back to the standard basis: ``F D F^dagger``."""
    f = dft_matrix(spec.N)
    return (f * eigenvalues_H(spec)) @ f.conj().T
