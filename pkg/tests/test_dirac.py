from collections import Counter
from math import gcd

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace.chain import ChainState, evolve as chain_evolve
from necklace.chain import movers
from necklace.dirac import (
    DiracSpec,
    GenChainState,
    Mode,
    bareiss_det,
    build_table,
    continuum_solution,
    convergence_order,
    decode,
    dirac_orbit_structure,
    dirac_step,
    dispersion_check,
    encode,
    evolve,
    step_raw,
    update_matrix,
    verify_bijective,
    wrap,
)
from necklace.errors import BoundExceeded, ValidationError
from necklace.perm import from_transpositions

# symbol indices of the reference M=1 grids (s^1, s^2, s^3 -> 1, 2, 3)
ADD_M1 = [[3, 1, 2], [1, 2, 3], [2, 3, 1]]
SUB_M1 = [[2, 3, 1], [1, 2, 3], [3, 1, 2]]


def loop_step(values, M, mu):
    """Site-by-site update with 1-based indices and explicit wrap."""
    n = len(values)
    S = n // 2
    get = lambda k: values[(k - 1) % n]  # noqa: E731
    out = [0] * n
    for j in range(1, S + 1):
        out[2 * j - 2] = get(2 * j + 1) - mu * get(2 * j)
        out[2 * j - 1] = get(2 * j - 2) + mu * get(2 * j - 1)
    m = 2 * M + 1
    return [((v + M) % m) - M for v in out]


def configs(max_S=5, max_M=6):
    return st.tuples(st.integers(1, max_S), st.integers(1, max_M)).flatmap(
        lambda sm: st.tuples(
            st.just(sm[0]), st.just(sm[1]),
            st.lists(st.integers(-sm[1], sm[1]), min_size=2 * sm[0], max_size=2 * sm[0]),
        )
    )


def test_wrap_examples():
    assert wrap(2, 1) == -1
    assert wrap(-2, 1) == 1
    assert wrap(1, 1) == 1
    assert wrap(7, 3) == 0
    assert wrap(np.array([4, -4, 0]), 3).tolist() == [-3, 3, 0]


def test_step_example():
    spec = DiracSpec(2, 1, 1)
    out = dirac_step(GenChainState(2, 1, (1, 0, 0, 0)), spec)
    assert out.values == (0, 1, 1, 0)


@given(configs(), st.integers(-3, 3))
@settings(max_examples=200)
def test_step_matches_loop_oracle(cfg, mu):
    S, M, values = cfg
    spec = DiracSpec(S, M, mu)
    assert list(dirac_step(GenChainState(S, M, values), spec).values) == loop_step(values, M, mu)


@given(configs(max_S=4, max_M=4))
@settings(max_examples=50)
def test_evolve_matches_repeated_step(cfg):
    S, M, values = cfg
    spec = DiracSpec(S, M, 1)
    trace = evolve(GenChainState(S, M, values), spec, 4)
    v = list(values)
    for row in trace.rows[1:]:
        v = loop_step(v, M, 1)
        assert row.tolist() == v
    assert trace.M == M


@given(configs(max_S=4, max_M=5), st.integers(0, 2**32 - 1), st.integers(-3, 3))
@settings(max_examples=100)
def test_linear_modulo(cfg, seed, mu):
    S, M, x = cfg
    y = np.random.default_rng(seed).integers(-M, M + 1, 2 * S)
    spec = DiracSpec(S, M, mu)
    f = lambda v: np.array(dirac_step(GenChainState(S, M, tuple(v)), spec).values)  # noqa: E731
    assert np.array_equal(f(wrap(np.array(x) + y, M)), wrap(f(x) + f(y), M))


def test_mu_zero_is_pure_transport():
    rng = np.random.default_rng(0)
    vals = rng.integers(-3, 4, 12)
    out = np.array(dirac_step(GenChainState(6, 3, tuple(vals)), DiracSpec(6, 3, 0)).values)
    assert np.array_equal(out[0::2], np.roll(vals[0::2], -1))
    assert np.array_equal(out[1::2], np.roll(vals[1::2], 1))


def test_mu_zero_agrees_with_spin_chain():
    spins = ChainState.random(5, np.random.default_rng(4))
    chain = chain_evolve(spins, 5)
    dirac = evolve(GenChainState(5, 1, spins.spins), DiracSpec(5, 1, 0), 5)
    assert np.array_equal(chain.rows, dirac.rows)


def test_mass_term_mixes_movers():
    # negative control: with mu != 0 the mover multisets are not conserved
    vals = (1, 0, 0, 0, 0, 0)
    out = dirac_step(GenChainState(3, 2, vals), DiracSpec(3, 2, 1)).values
    assert Counter(movers(out)[1]) != Counter(movers(vals)[1])


def test_boundary_wraps_right_mover_source():
    # R'(2) reads R(2S), the periodic neighbour of site 2
    vals = [0] * 8
    vals[7] = 1
    out = dirac_step(GenChainState(4, 2, tuple(vals)), DiracSpec(4, 2, 1)).values
    assert out[1] == 1


@pytest.mark.parametrize("kind,expected", [("add", ADD_M1), ("sub", SUB_M1)])
def test_reference_tables(kind, expected):
    t = build_table(1, kind)
    assert (t.table + 2).tolist() == expected


def test_table_text():
    text = build_table(1, "add").to_text()
    assert "s^1 | s^3 s^1 s^2" in text


@pytest.mark.parametrize("M", range(1, 17))
def test_table_invariants(M):
    add, sub = build_table(M, "add"), build_table(M, "sub")
    n = 2 * M + 1
    full = np.arange(-M, M + 1)
    for t in (add, sub):
        for r in range(n):
            assert sorted(t.table[r]) == full.tolist()
            assert sorted(t.table[:, r]) == full.tolist()
    assert np.array_equal(add.table, add.table.T)
    assert np.array_equal(wrap(sub.table + sub.table.T, M), np.zeros((n, n), dtype=int))
    assert add.lookup(0, M) == M and add.lookup(1, M) == -M
    assert np.array_equal(add.table[M], full)


def test_row_transpositions_reproduce_rows():
    for M in (1, 2, 5):
        for kind in ("add", "sub"):
            t = build_table(M, kind)
            for r in t.values():
                seq = t.row_transpositions(int(r))
                got = from_transpositions(2 * M + 1, seq).apply(list(t.values()))
                assert got == t.table[r + M].tolist()
                assert t.row_permutation(int(r)).apply(list(t.values())) == got


def test_reference_decomposition_of_third_row():
    t = build_table(1, "add")
    assert from_transpositions(3, [(1, 2), (0, 2)]).apply(list(t.values())) == t.table[2].tolist()


@pytest.mark.parametrize("S,M", [(2, 1), (2, 2), (3, 1), (2, 3)])
def test_exhaustive_bijective(S, M):
    res = verify_bijective(DiracSpec(S, M, 1), Mode.EXHAUSTIVE)
    assert res.bijective and res.image_size == (2 * M + 1) ** (2 * S)


def test_non_bijective_instance():
    res = verify_bijective(DiracSpec(2, 2, 2), Mode.EXHAUSTIVE)
    assert not res.bijective
    assert res.image_size == 25
    assert not verify_bijective(DiracSpec(2, 2, 2), Mode.MODULAR).bijective


@pytest.mark.parametrize("S", [1, 2, 3])
@pytest.mark.parametrize("M", [1, 2, 3, 4])
@pytest.mark.parametrize("mu", [0, 1, 2, 3])
def test_modular_agrees_with_exhaustive(S, M, mu):
    spec = DiracSpec(S, M, mu)
    if spec.n_configs > 10**6:
        pytest.skip("large")
    ex = verify_bijective(spec, Mode.EXHAUSTIVE)
    mod = verify_bijective(spec, Mode.MODULAR)
    assert ex.bijective == mod.bijective
    assert mod.bijective == (gcd(1 + mu * mu, 2 * M + 1) == 1)


@pytest.mark.parametrize("S", range(1, 6))
@pytest.mark.parametrize("mu", [0, 1, 2, -3])
def test_determinant_against_sympy(S, mu):
    a = update_matrix(S, mu)
    assert bareiss_det(a) == sympy.Matrix(a).det() == (1 + mu * mu) ** S


def test_update_matrix_matches_step():
    a = np.array(update_matrix(3, 2))
    v = np.arange(6) - 2
    assert np.array_equal(a @ v, step_raw(v, 2))


def test_auto_mode_switches_to_modular():
    res = verify_bijective(DiracSpec(12, 3, 1))
    assert res.mode is Mode.MODULAR and res.bijective


def test_exhaustive_bound():
    with pytest.raises(BoundExceeded):
        verify_bijective(DiracSpec(12, 3, 1), Mode.EXHAUSTIVE)


def test_orbit_fixture():
    assert dirac_orbit_structure(DiracSpec(2, 1, 1)).histogram() == {1: 1, 8: 10}


def test_encode_decode_roundtrip():
    idx = np.arange(3**4)
    assert np.array_equal(encode(decode(idx, 2, 1), 1), idx)


def test_state_validation():
    with pytest.raises(ValidationError):
        GenChainState(2, 1, (2, 0, 0, 0))
    with pytest.raises(ValidationError):
        DiracSpec(2, 1, 0.5)


def test_continuum_solution_mu_zero_is_shift():
    left = np.sin(2 * np.pi * np.arange(16) / 16)
    right = np.cos(2 * np.pi * 3 * np.arange(16) / 16)
    cl, cr = continuum_solution(left, right, 0.0, 2)
    np.testing.assert_allclose(cl, np.roll(left, -2), atol=1e-12)
    np.testing.assert_allclose(cr, np.roll(right, 2), atol=1e-12)


def test_mu_zero_dispersion_exact():
    rep = dispersion_check(DiracSpec(32, 100, 0), 3, 50, 20)
    assert rep.valid
    assert rep.integer_vs_real == 0
    assert rep.continuum_deviation < 1e-9


def test_wrap_event_flagged():
    rep = dispersion_check(DiracSpec(8, 5, 1), 1, 4, 10)
    assert rep.wrap_event and not rep.valid


def test_integer_matches_float_without_wrap():
    rep = dispersion_check(DiracSpec(16, 10**6, 1), 1, 100, 6)
    assert rep.valid and rep.integer_vs_real == 0


def test_unit_mass_does_not_converge():
    # unit coupling is far from the continuum scaling; the amplitude grows each step
    order, coarse, fine = convergence_order(1, 10**12, 16, 1, 1000, 8)
    assert coarse.valid and fine.valid
    assert order < 1.8


def _scaled_error(n, mu, steps):
    j = np.arange(n)
    left, right = np.cos(2 * np.pi * j / n), np.zeros(n)
    cur = np.empty(2 * n)
    cur[0::2], cur[1::2] = left, right
    for _ in range(steps):
        cur = step_raw(cur, mu)
    cl, cr = continuum_solution(left, right, mu, steps)
    return max(np.abs(cur[0::2] - cl).max(), np.abs(cur[1::2] - cr).max())


def test_scaled_real_coupling_is_first_order():
    # halve the coupling while doubling the grid and the step count: fixed physical time
    coarse = _scaled_error(32, 2.0 / 32, 32)
    fine = _scaled_error(64, 1.0 / 32, 64)
    assert np.log2(coarse / fine) == pytest.approx(1.0, abs=0.1)
