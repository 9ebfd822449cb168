"""Mass-coupled "necklace of necklaces" automaton for the 1+1D Dirac equation.

Each of the 2S sites carries a value in ``{-M, ..., M}`` with the cyclic
identification ``M + 1 == -M``.  Odd sites hold left-movers, even sites
right-movers.  One synchronous step (1-based sites, periodic):

    L'(2j-1) = L(2j+1) - mu R(2j)
    R'(2j)   = R(2j-2) + mu L(2j-1)
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import BoundExceeded, ValidationError
from .perm import CycleDecomposition, Permutation, cycle_decompose
from .trace import SpacetimeTrace

EXHAUSTIVE_MAX_CONFIGS = 10**7
_CHUNK = 1 << 18


def wrap(x, M: int):
    """Map integers onto ``{-M, ..., M}`` modulo ``2M + 1``."""
    n = 2 * M + 1
    if isinstance(x, np.ndarray):
        return (x + M) % n - M
    return (int(x) + M) % n - M


@dataclass(frozen=True)
class DiracSpec:
    S: int
    M: int
    mu: int = 1

    def __post_init__(self):
        if self.S < 1 or self.M < 1:
            raise ValidationError("S and M must be positive")
        if int(self.mu) != self.mu:
            raise ValidationError("mu must be an integer")
        object.__setattr__(self, "mu", int(self.mu))

    @property
    def modulus(self) -> int:
        return 2 * self.M + 1

    @property
    def n_configs(self) -> int:
        return self.modulus ** (2 * self.S)


@dataclass(frozen=True)
class GenChainState:
    S: int
    M: int
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if len(values) != 2 * self.S:
            raise ValidationError(f"need {2 * self.S} values, got {len(values)}")
        if any(abs(v) > self.M for v in values):
            raise ValidationError(f"values must lie in [-{self.M}, {self.M}]")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, S: int, M: int) -> "GenChainState":
        return cls(S, M, (0,) * (2 * S))


# --- dynamics ------------------------------------------------------------------


def step_raw(values: np.ndarray, mu) -> np.ndarray:
    """One step without the wrap, along the last axis (works for ints and floats)."""
    left = values[..., 0::2]
    right = values[..., 1::2]
    out = np.empty_like(values)
    out[..., 0::2] = np.roll(left, -1, axis=-1) - mu * right
    out[..., 1::2] = np.roll(right, 1, axis=-1) + mu * left
    return out


def dirac_step(state: GenChainState, spec: DiracSpec) -> GenChainState:
    if (state.S, state.M) != (spec.S, spec.M):
        raise ValidationError(f"state (S={state.S}, M={state.M}) does not match spec")
    raw = step_raw(np.array(state.values, dtype=object), spec.mu)
    return GenChainState(spec.S, spec.M, tuple(wrap(int(v), spec.M) for v in raw))


def evolve(state: GenChainState, spec: DiracSpec, steps: int) -> SpacetimeTrace:
    if steps < 0:
        raise ValidationError("steps must be >= 0")
    if (state.S, state.M) != (spec.S, spec.M):
        raise ValidationError("state does not match spec")
    rows = np.empty((steps + 1, 2 * spec.S), dtype=np.int64)
    rows[0] = state.values
    for n in range(steps):
        rows[n + 1] = wrap(step_raw(rows[n], spec.mu), spec.M)
    return SpacetimeTrace(S=spec.S, rows=rows, M=spec.M, meta={"op": "dirac", "mu": spec.mu})


def update_matrix(S: int, mu: int) -> list[list[int]]:
    """Integer matrix ``A`` with ``new = A @ old`` (site order, before wrapping)."""
    n = 2 * S
    a = [[0] * n for _ in range(n)]
    for j in range(S):
        l_site, r_site = 2 * j, 2 * j + 1
        a[l_site][(l_site + 2) % n] += 1
        a[l_site][r_site] -= mu
        a[r_site][(r_site - 2) % n] += 1
        a[r_site][l_site] += mu
    return a


def bareiss_det(matrix) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValidationError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# --- configuration-space enumeration ----------------------------------------------


def encode(values: np.ndarray, M: int) -> np.ndarray:
    """Mixed-radix index: digit ``value + M`` at weight ``(2M+1)**site``."""
    n = 2 * M + 1
    weights = n ** np.arange(values.shape[-1], dtype=np.int64)
    return ((values + M) * weights).sum(axis=-1)


def decode(index: np.ndarray, S: int, M: int) -> np.ndarray:
    n = 2 * M + 1
    weights = n ** np.arange(2 * S, dtype=np.int64)
    return (np.asarray(index)[..., None] // weights) % n - M


class Mode(enum.Enum):
    AUTO = "auto"
    EXHAUSTIVE = "exhaustive"
    MODULAR = "modular"


@dataclass(frozen=True)
class Bijectivity:
    bijective: bool
    mode: Mode
    n_configs: int
    image_size: int | None = None
    determinant: int | None = None
    certificate: Permutation | None = field(default=None, repr=False)


def configuration_permutation(spec: DiracSpec) -> tuple[np.ndarray, int]:
    """Images of every configuration index and the number of distinct images."""
    if spec.n_configs > EXHAUSTIVE_MAX_CONFIGS:
        raise BoundExceeded(
            f"{spec.n_configs} configurations exceed the exhaustive bound of {EXHAUSTIVE_MAX_CONFIGS}"
        )
    total = spec.n_configs
    images = np.empty(total, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        vals = decode(idx, spec.S, spec.M)
        images[start:start + idx.size] = encode(wrap(step_raw(vals, spec.mu), spec.M), spec.M)
    seen = np.zeros(total, dtype=bool)
    seen[images] = True
    return images, int(seen.sum())


def verify_bijective(spec: DiracSpec, mode: Mode | str = Mode.AUTO) -> Bijectivity:
    mode = Mode(mode)
    if mode is Mode.AUTO:
        mode = Mode.EXHAUSTIVE if spec.n_configs <= EXHAUSTIVE_MAX_CONFIGS else Mode.MODULAR
    det = bareiss_det(update_matrix(spec.S, spec.mu))
    if mode is Mode.MODULAR:
        return Bijectivity(gcd(det, spec.modulus) == 1, mode, spec.n_configs, determinant=det)
    images, image_size = configuration_permutation(spec)
    ok = image_size == spec.n_configs
    cert = Permutation(images, check=False) if ok else None
    return Bijectivity(ok, mode, spec.n_configs, image_size, det, cert)


def dirac_orbit_structure(spec: DiracSpec) -> CycleDecomposition:
    result = verify_bijective(spec, Mode.EXHAUSTIVE)
    if not result.bijective:
        raise ValidationError("update is not bijective; no cycle structure")
    return cycle_decompose(result.certificate)


# --- permutation arithmetic tables -----------------------------------------------


class Kind(enum.Enum):
    ADD = "add"
    SUB = "sub"


@dataclass(frozen=True)
class ArithmeticTable:
    """``table[r][c]`` with row ``r`` the mass-term value and column ``c`` the mover value.

    Indices are ``value + M``.  ADD holds ``wrap(r + c)``, SUB ``wrap(c - r)``.
    """

    M: int
    kind: Kind
    table: np.ndarray

    def values(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    def lookup(self, row_value: int, col_value: int) -> int:
        return int(self.table[row_value + self.M, col_value + self.M])

    def row_permutation(self, row_value: int) -> Permutation:
        """The permutation taking the ordered symbols ``(-M, ..., M)`` to this row."""
        row = self.table[row_value + self.M]
        target = np.empty(row.size, dtype=np.int64)
        target[row + self.M] = np.arange(row.size)
        return Permutation(target)

    def row_transpositions(self, row_value: int) -> list[tuple[int, int]]:
        """Swaps (0-based symbol positions, application order) that produce the row."""
        row = (self.table[row_value + self.M] + self.M).tolist()
        current = list(range(len(row)))
        swaps = []
        for i, want in enumerate(row):
            if current[i] != want:
                k = current.index(want, i + 1)
                current[i], current[k] = current[k], current[i]
                swaps.append((i, k))
        return swaps

    def to_text(self) -> str:
        """Symbol grid ``s^m`` with ``m = value + M + 1``, row labels on the left."""
        n = 2 * self.M + 1
        sym = [f"s^{m}" for m in range(1, n + 1)]
        row_name, col_name = ("S^L", "S^R") if self.kind is Kind.ADD else ("S^R", "S^L")
        width = max(len(s) for s in sym + [row_name, col_name])
        name = "S_+" if self.kind is Kind.ADD else "S_-"
        lines = [f"{name} (rows: {row_name}, columns: {col_name}, M={self.M})"]
        lines.append(" " * width + " | " + " ".join(s.ljust(width) for s in sym).rstrip())
        lines.append("-" * width + "-+-" + "-" * (n * (width + 1) - 1))
        for r in range(n):
            cells = " ".join(sym[int(v) + self.M].ljust(width) for v in self.table[r])
            lines.append(sym[r].ljust(width) + " | " + cells.rstrip())
        return "\n".join(lines) + "\n"


def build_table(M: int, kind: Kind | str) -> ArithmeticTable:
    if M < 1:
        raise ValidationError("M must be positive")
    kind = Kind(kind)
    v = np.arange(-M, M + 1)
    rows, cols = v[:, None], v[None, :]
    table = wrap(rows + cols if kind is Kind.ADD else cols - rows, M)
    table.setflags(write=False)
    return ArithmeticTable(M, kind, table)


# --- continuum comparison ----------------------------------------------------------


@dataclass(frozen=True)
class DispersionReport:
    S: int
    M: int
    mu: int
    kappa: float
    omega: float
    steps: int
    wrap_event: bool
    integer_vs_real: float
    continuum_deviation: float

    @property
    def valid(self) -> bool:
        return not self.wrap_event


def plane_wave(S: int, kappa_index: int, amplitude: float) -> tuple[np.ndarray, np.ndarray]:
    """Integer ``(L, R)`` sampling ``amplitude * (cos, sin)(kappa j)`` on S sublattice sites."""
    j = np.arange(S)
    kappa = 2 * np.pi * kappa_index / S
    left = np.rint(amplitude * np.cos(kappa * j)).astype(np.int64)
    right = np.rint(amplitude * np.sin(kappa * j)).astype(np.int64)
    return left, right


def continuum_solution(left, right, mu: float, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact periodic solution of ``d_t P1 = d_x P1 - mu P2``, ``d_t P2 = -d_x P2 + mu P1``.

    Mode by mode, ``exp(G t)`` with ``G = [[ik, -mu], [mu, -ik]]`` and
    ``G^2 = -(k^2 + mu^2)``.
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    n = left.size
    k = 2 * np.pi * np.fft.fftfreq(n)
    a, b = np.fft.fft(left), np.fft.fft(right)
    omega = np.sqrt(k**2 + mu**2)
    c = np.cos(omega * t)
    s = np.where(omega > 0, np.sin(omega * t) / np.where(omega > 0, omega, 1), t)
    new_a = c * a + s * (1j * k * a - mu * b)
    new_b = c * b + s * (mu * a - 1j * k * b)
    return np.fft.ifft(new_a).real, np.fft.ifft(new_b).real


def dispersion_check(
    spec: DiracSpec, kappa_index: int, amplitude: float, steps: int,
    init: tuple[np.ndarray, np.ndarray] | None = None,
) -> DispersionReport:
    """Run the integer automaton, its float twin, and the continuum PDE side by side.

    ``continuum_deviation`` is ``max |lattice - continuum| / max |initial|``
    at the final step.
    """
    S = spec.S
    left, right = plane_wave(S, kappa_index, amplitude) if init is None else map(np.asarray, init)
    values = np.empty(2 * S, dtype=np.int64)
    values[0::2], values[1::2] = left, right
    if np.abs(values).max() > spec.M:
        raise ValidationError("initial data exceed M")
    real = values.astype(float)
    wrapped = False
    for _ in range(steps):
        raw = step_raw(values, spec.mu)
        if np.abs(raw).max() > spec.M:
            wrapped = True
        values = wrap(raw, spec.M)
        real = step_raw(real, float(spec.mu))
    cl, cr = continuum_solution(left, right, spec.mu, steps)
    lattice = np.stack([values[0::2], values[1::2]]).astype(float)
    cont = np.stack([cl, cr])
    scale = max(float(np.abs(np.stack([left, right])).max()), 1.0)
    kappa = 2 * np.pi * kappa_index / S
    return DispersionReport(
        S=S, M=spec.M, mu=spec.mu, kappa=kappa, omega=float(np.hypot(kappa, spec.mu)),
        steps=steps, wrap_event=wrapped,
        integer_vs_real=float(np.abs(values - real).max()),
        continuum_deviation=float(np.abs(lattice - cont).max() / scale),
    )


def convergence_order(
    mu: int, M: int, S: int, kappa_index: int, amplitude: float, steps: int
) -> tuple[float, DispersionReport, DispersionReport]:
    """``log2(err_coarse / err_fine)`` where the fine run doubles S (halving kappa)."""
    coarse = dispersion_check(DiracSpec(S, M, mu), kappa_index, amplitude, steps)
    fine = dispersion_check(DiracSpec(2 * S, M, mu), kappa_index, amplitude, steps)
    return float(np.log2(coarse.continuum_deviation / fine.continuum_deviation)), coarse, fine
