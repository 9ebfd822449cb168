from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from necklace.chain import (
    ChainState,
    evolve,
    even_pairs,
    interleave,
    movers,
    odd_pairs,
    update_permutation,
)
from necklace.errors import ValidationError
from necklace.perm import compose, from_transpositions, power


def brute_force_update(spins):
    """Apply the 2S exchanges one at a time to a list, even pairs first (1-based sites)."""
    s = list(spins)
    n = len(s)
    S = n // 2
    site = lambda k: (k - 1) % n  # noqa: E731
    for l in range(1, S + 1):
        a, b = site(2 * l), site(2 * l + 1)
        s[a], s[b] = s[b], s[a]
    for k in range(1, S + 1):
        a, b = site(2 * k - 1), site(2 * k)
        s[a], s[b] = s[b], s[a]
    return s


def defect_sites(row):
    return [k + 1 for k, v in enumerate(row) if v == -1]


def states(max_S=16):
    return st.integers(1, max_S).flatmap(
        lambda S: st.lists(st.sampled_from([-1, 1]), min_size=2 * S, max_size=2 * S)
    ).map(lambda spins: ChainState(tuple(spins)))


def test_s1_update_is_identity():
    assert update_permutation(1).is_identity()


def test_s2_update_relocates_pairs():
    assert update_permutation(2).apply(list("abcd")) == list("cdab")


@pytest.mark.parametrize("S", range(2, 9))
def test_period_s(S):
    u = update_permutation(S)
    assert power(u, S).is_identity()
    assert all(not power(u, k).is_identity() for k in range(1, S))


def test_uniform_state_invariant():
    trace = evolve(ChainState.uniform(5), 7)
    assert (trace.rows == 1).all()
    assert trace.steps == 7


def test_odd_defect_moves_left():
    trace = evolve(ChainState.with_defect(4, 3), 4)
    assert [defect_sites(r)[0] for r in trace.rows] == [3, 1, 7, 5, 3]


def test_even_defect_moves_right():
    trace = evolve(ChainState.with_defect(4, 2), 4)
    assert [defect_sites(r)[0] for r in trace.rows] == [2, 4, 6, 8, 2]


def test_movers_examples():
    assert movers(("a", "b", "c", "d")) == (("a", "c"), ("b", "d"))
    left, right = movers(ChainState((1, -1) * 4))
    assert set(left) == {1} and set(right) == {-1}


@given(states())
def test_movers_interleave_roundtrip(state):
    assert interleave(*movers(state)) == state.spins


@given(states())
def test_evolve_matches_brute_force(state):
    trace = evolve(state, 3)
    s = list(state.spins)
    for row in trace.rows[1:]:
        s = brute_force_update(s)
        assert row.tolist() == s


@given(states())
def test_mover_multisets_conserved(state):
    trace = evolve(state, state.S + 1)
    left0, right0 = movers(state)
    for row in trace.rows:
        left, right = movers(tuple(row))
        assert Counter(left) == Counter(left0)
        assert Counter(right) == Counter(right0)


@given(st.integers(1, 12).flatmap(lambda S: st.tuples(st.just(S), st.integers(1, 2 * S))))
def test_light_cone(args):
    S, site = args
    trace = evolve(ChainState.with_defect(S, site), 2 * S)
    direction = -1 if site % 2 else 1
    for n, row in enumerate(trace.rows):
        assert defect_sites(row) == [(site - 1 + 2 * n * direction) % (2 * S) + 1]


@pytest.mark.parametrize("S", [1, 2, 5, 16])
def test_intra_group_order_irrelevant(S):
    rng = np.random.default_rng(S)
    ev, od = even_pairs(S), odd_pairs(S)
    ref = update_permutation(S)
    for _ in range(5):
        seq = [ev[i] for i in rng.permutation(S)] + [od[i] for i in rng.permutation(S)]
        assert from_transpositions(2 * S, seq) == ref


@pytest.mark.parametrize("S", [2, 3, 6])
def test_within_group_pairs_commute(S):
    for group in (even_pairs(S), odd_pairs(S)):
        for a in group:
            for b in group:
                pa, pb = from_transpositions(2 * S, [a]), from_transpositions(2 * S, [b])
                assert compose(pa, pb) == compose(pb, pa)


def test_state_validation():
    with pytest.raises(ValidationError):
        ChainState((1, 0))
    with pytest.raises(ValidationError):
        ChainState((1, 1, 1))
    with pytest.raises(ValidationError):
        ChainState.with_defect(2, 5)
