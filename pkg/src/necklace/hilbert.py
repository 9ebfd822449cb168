"""Permutation dynamics lifted to the complex vector space over chain configurations.

Basis index of a chain state: bit ``k`` is 1 iff the spin on site ``k + 1``
is ``+1``.  ``lift(p)`` sends basis vector ``e_i`` to ``e_{p(i)}``.

Hamiltonians are built orbit by orbit: every length-``L`` cycle of the
basis permutation gets the ``L``-state cogwheel block, fixed points get 0.
The closed cotangent-sum form is kept as an independent cross-check; it is
evaluated with the inverse update so that ``exp(-i H T) = lift(U)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .chain import ChainState, update_permutation, update_transpositions
from .cogwheel import CogwheelSpec, hamiltonian_standard_basis
from .errors import BoundExceeded, ValidationError
from .matrices import expm_hermitian, max_abs
from .perm import Permutation, cycle_decompose, from_transpositions, inverse, power

ENUMERATION_MAX_SITES = 24
DENSE_MAX_SITES = 14
COTANGENT_MAX_SITES = 12
PAULI_MAX_QUBITS = 12


@dataclass(frozen=True)
class BasisIndexer:
    S: int

    @property
    def n_sites(self) -> int:
        return 2 * self.S

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def encode(self, state: ChainState) -> int:
        if state.S != self.S:
            raise ValidationError(f"state has S={state.S}, indexer S={self.S}")
        idx = 0
        for k, s in enumerate(state.spins):
            if s == 1:
                idx |= 1 << k
        return idx

    def decode(self, index: int) -> ChainState:
        if not 0 <= index < self.dim:
            raise ValidationError(f"basis index {index} outside [0, {self.dim})")
        return ChainState(tuple(1 if (index >> k) & 1 else -1 for k in range(self.n_sites)))


def basis_permutation(site_perm: Permutation) -> Permutation:
    """Permutation of the ``2**n`` bit-string basis induced by moving site contents."""
    n = site_perm.size
    if n > ENUMERATION_MAX_SITES:
        raise BoundExceeded(f"{n} sites exceeds the enumeration bound of {ENUMERATION_MAX_SITES}")
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros_like(idx)
    for k, target in enumerate(site_perm.map.tolist()):
        out |= ((idx >> k) & 1) << target
    return Permutation(out, check=False)


def chain_update_on_basis(S: int) -> Permutation:
    if 2 * S > ENUMERATION_MAX_SITES:
        raise BoundExceeded(f"2S={2 * S} exceeds the enumeration bound of {ENUMERATION_MAX_SITES}")
    return _chain_update_on_basis(S)


@lru_cache(maxsize=16)
def _chain_update_on_basis(S: int) -> Permutation:
    return basis_permutation(update_permutation(S))


def lift(p: Permutation, dim: int | None = None) -> np.ndarray:
    if dim is not None and dim != p.size:
        raise ValidationError(f"permutation size {p.size} != dim {dim}")
    m = np.zeros((p.size, p.size), dtype=complex)
    m[p.map, np.arange(p.size)] = 1
    return m


def lift_sparse(p: Permutation) -> sp.csr_array:
    n = p.size
    return sp.csr_array((np.ones(n, dtype=complex), (p.map, np.arange(n))), shape=(n, n))


# --- orbit-wise generators -------------------------------------------------------


@dataclass(frozen=True)
class OrbitBlock:
    """One cycle ``(r, p(r), p(p(r)), ...)`` and its Hermitian generator block."""

    orbit: tuple[int, ...]
    block: np.ndarray

    @property
    def length(self) -> int:
        return len(self.orbit)


def cogwheel_block(L: int, scale: float) -> np.ndarray:
    """Generator block for a forward-listed length-``L`` orbit.

    The cogwheel matrix describes ``e_m -> e_{m-1}``; a forward-listed orbit
    steps ``e_a -> e_{a+1}``, which is the same shift read backwards, so the
    block is the transpose.
    """
    return hamiltonian_standard_basis(CogwheelSpec(L, scale)).T


def orbit_blocks(p: Permutation, scale: float = 1.0) -> list[OrbitBlock]:
    blocks = []
    for cyc in cycle_decompose(p).cycles:
        blocks.append(OrbitBlock(cyc, cogwheel_block(len(cyc), scale)))
    return blocks


def generator_from_blocks(blocks: list[OrbitBlock], dim: int) -> sp.csr_array:
    rows, cols, vals = [], [], []
    for b in blocks:
        if b.length == 1:
            continue
        o = np.asarray(b.orbit)
        rr, cc = np.meshgrid(o, o, indexing="ij")
        rows.append(rr.ravel())
        cols.append(cc.ravel())
        vals.append(b.block.ravel())
    if not rows:
        return sp.csr_array((dim, dim), dtype=complex)
    return sp.csr_array(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    )


def generator(p: Permutation, scale: float = 1.0) -> sp.csr_array:
    """Hermitian ``G`` with ``exp(-i G scale) = lift(p)``, eigenvalues in ``[0, 2 pi / scale)``."""
    return generator_from_blocks(orbit_blocks(p, scale), p.size)


def extract_hamiltonian(S: int, T: float = 1.0, dense: bool = False):
    """Chain Hamiltonian, block-diagonal over update orbits (sparse unless ``dense``)."""
    if dense and 2 * S > DENSE_MAX_SITES:
        raise BoundExceeded(f"dense assembly limited to 2S <= {DENSE_MAX_SITES}")
    h = generator(chain_update_on_basis(S), T)
    return h.toarray() if dense else h


def orbit_roundtrip_error(blocks: list[OrbitBlock], scale: float) -> float:
    """Max deviation of ``exp(-i block scale)`` from the forward shift on each orbit."""
    worst = 0.0
    cache: dict[int, float] = {}
    for b in blocks:
        L = b.length
        if L not in cache:
            shift = np.roll(np.eye(L), 1, axis=0)  # e_a -> e_{a+1}
            cache[L] = max_abs(expm_hermitian(b.block, scale) - shift)
        worst = max(worst, cache[L])
    return worst


def orbit_report(p: Permutation) -> list[str]:
    return [f"len={len(c)} rep={c[0]}" for c in cycle_decompose(p).cycles]


# --- closed cotangent-sum form -------------------------------------------------------


def cotangent_sum_generator(p: Permutation, period: int, scale: float) -> sp.csr_array:
    """``(pi/scale) (1 + (i / 2 period) sum_n cot(pi n / period) (V^n - V^-n))`` with ``V = p^-1``."""
    dim = p.size
    v = inverse(p)
    acc = sp.identity(dim, dtype=complex, format="csr")
    for n in range(1, period):
        vn = power(v, n)
        diff = lift_sparse(vn) - lift_sparse(inverse(vn))
        acc = acc + (1j / (2 * period)) / np.tan(np.pi * n / period) * diff
    return sp.csr_array(acc * (np.pi / scale))


def projected_deviation(a: sp.sparray, b: sp.sparray, p: Permutation) -> tuple[float, float]:
    """Compare two operators that commute with ``lift(p)``.

    Returns ``(projected, basis)``: the max deviation on the orthogonal
    complement of the ``p``-invariant vectors, and the plain max deviation
    over non-fixed basis states.  Entries coupling different orbits count
    toward both.
    """
    d = sp.csr_array(a - b)
    cycles = cycle_decompose(p).cycles
    orbit_id = np.empty(p.size, dtype=np.int64)
    for k, c in enumerate(cycles):
        orbit_id[list(c)] = k
    coo = d.tocoo()
    cross = orbit_id[coo.row] != orbit_id[coo.col]
    off = float(np.abs(coo.data[cross]).max()) if cross.any() else 0.0
    proj = basis = off
    for c in cycles:
        L = len(c)
        if L == 1:
            continue
        o = list(c)
        sub = d[o][:, o].toarray()
        q = np.eye(L) - 1.0 / L
        proj = max(proj, max_abs(q @ sub @ q))
        basis = max(basis, max_abs(sub))
    return proj, basis


def verify_cotangent_form(S: int, T: float = 1.0) -> float:
    """Max deviation between the cotangent-sum Hamiltonian and the orbit construction.

    Measured on the complement of the invariant subspace; see
    :func:`projected_deviation`.
    """
    if 2 * S > COTANGENT_MAX_SITES:
        raise BoundExceeded(f"dense cotangent form limited to 2S <= {COTANGENT_MAX_SITES}")
    u = chain_update_on_basis(S)
    closed = cotangent_sum_generator(u, S, T)
    return projected_deviation(closed, extract_hamiltonian(S, T), u)[0]


def cotangent_basis_deviation(S: int, T: float = 1.0) -> float:
    """Unprojected deviation on non-fixed basis states (pi / (L T) on a length-L orbit)."""
    u = chain_update_on_basis(S)
    closed = cotangent_sum_generator(u, S, T)
    return projected_deviation(closed, extract_hamiltonian(S, T), u)[1]


# --- qubit embedding and the perturbed exchange ------------------------------------

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def embed(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """``op`` on ``qubit`` (bit ``qubit`` of the basis index), identity elsewhere."""
    out = np.ones((1, 1), dtype=complex)
    for q in reversed(range(n_qubits)):
        out = np.kron(out, op if q == qubit else np.eye(2))
    return out


def _check_pair(i: int, j: int, n_qubits: int):
    if n_qubits > PAULI_MAX_QUBITS:
        raise BoundExceeded(f"n_qubits limited to {PAULI_MAX_QUBITS}")
    if i == j or not (0 <= i < n_qubits and 0 <= j < n_qubits):
        raise ValidationError(f"need distinct qubits in range, got ({i}, {j}) of {n_qubits}")


def pauli_exchange(i: int, j: int, n_qubits: int) -> np.ndarray:
    """``(sigma_i . sigma_j + 1) / 2``."""
    _check_pair(i, j, n_qubits)
    dot = sum(embed(s, i, n_qubits) @ embed(s, j, n_qubits) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    return (dot + np.eye(1 << n_qubits)) / 2


def exchange_permutation(i: int, j: int, n_qubits: int) -> Permutation:
    _check_pair(i, j, n_qubits)
    return basis_permutation(from_transpositions(n_qubits, [(i, j)]))


def _perturbed_coefficients(eps: float) -> tuple[float, float]:
    # a = (pi/2)(1+eps): cos a = -sin(pi eps/2), sin a = cos(pi eps/2), exact at eps = 0
    return -np.sin(np.pi * eps / 2), np.cos(np.pi * eps / 2)


def perturbed_exchange(i: int, j: int, n_qubits: int, eps: float) -> np.ndarray:
    """``i exp(-i (pi/2)(1+eps) P_ij) = i cos(a) 1 + sin(a) P_ij``, using ``P_ij^2 = 1``."""
    cos_a, sin_a = _perturbed_coefficients(eps)
    p = lift(exchange_permutation(i, j, n_qubits))
    return 1j * cos_a * np.eye(p.shape[0]) + sin_a * p


def apply_perturbed_exchange(v: np.ndarray, site_pair, n_sites: int, eps: float) -> np.ndarray:
    i, j = site_pair
    swap = basis_permutation(from_transpositions(n_sites, [(i, j)]))
    cos_a, sin_a = _perturbed_coefficients(eps)
    # lift(swap) v = v[swap^-1] and a transposition is its own inverse
    return 1j * cos_a * v + sin_a * v[swap.map]


def perturbed_update(v: np.ndarray, S: int, eps: float) -> np.ndarray:
    """Chain update with every exchange replaced by its perturbed version."""
    if 2 * S > PAULI_MAX_QUBITS:
        raise BoundExceeded(f"perturbed evolution limited to 2S <= {PAULI_MAX_QUBITS}")
    for t in update_transpositions(S):
        v = apply_perturbed_exchange(v, t, 2 * S, eps)
    return v


def basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1
    return v


def superposition_measure(v: np.ndarray, tol: float = 1e-10) -> float:
    """``1 - max |amp|^2``; zero exactly on basis states up to phase."""
    v = np.asarray(v)
    probs = np.abs(v) ** 2
    if abs(probs.sum() - 1) > tol:
        raise ValidationError(f"state is not normalized (norm^2 = {probs.sum()!r})")
    return float(1 - probs.max())
