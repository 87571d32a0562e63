import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cfr_alt.regret import (
    RegretKind,
    RegretState,
    normalized_positive,
    policy_from_state,
    segment_policies,
    segment_update,
    update,
)

KINDS = [RegretKind.RM, RegretKind.RM_PLUS]


def vectors(n):
    return arrays(np.float64, n, elements=st.floats(-1, 1, allow_nan=False))


@pytest.mark.parametrize(
    "stored, expected",
    [
        ((0.0, 0.0), (0.5, 0.5)),
        ((2.0, -1.0, 1.0), (2 / 3, 0.0, 1 / 3)),
        ((-3.0, -1.0), (0.5, 0.5)),
    ],
)
def test_policy_examples(stored, expected):
    np.testing.assert_allclose(policy_from_state(RegretState(np.array(stored))), expected, rtol=0, atol=1e-15)


def test_rm_update_example():
    nxt = update(RegretState.zeros(2), np.array([1.0, 0.0]))
    np.testing.assert_array_equal(nxt.stored, [0.5, -0.5])


def test_rm_plus_update_clamps():
    nxt = update(RegretState.zeros(2, RegretKind.RM_PLUS), np.array([0.0, -1.0]))
    np.testing.assert_array_equal(nxt.stored, [0.5, 0.0])


def test_rm_plus_zero_increment():
    state = RegretState(np.array([1.0, 0.0]), RegretKind.RM_PLUS)
    np.testing.assert_array_equal(policy_from_state(state), [1.0, 0.0])
    np.testing.assert_array_equal(update(state, np.zeros(2)).stored, [1.0, 0.0])


def test_tiny_positive_is_not_uniform():
    np.testing.assert_array_equal(normalized_positive(np.array([1e-300, 0.0])), [1.0, 0.0])


def test_state_errors():
    with pytest.raises(ValueError):
        RegretState(np.array([0.5, -0.1]), RegretKind.RM_PLUS)
    with pytest.raises(ValueError):
        RegretState(np.array([]))
    with pytest.raises(ValueError):
        update(RegretState.zeros(2), np.zeros(3))


def test_update_is_pure():
    state = RegretState(np.array([0.2, -0.1]))
    before = state.stored.copy()
    update(state, np.array([1.0, -1.0]))
    np.testing.assert_array_equal(state.stored, before)
    with pytest.raises(ValueError):
        state.stored[0] = 1.0  # read-only


@given(st.sampled_from(KINDS), st.integers(1, 6).flatmap(lambda n: st.tuples(vectors(n), vectors(n))))
def test_policy_is_distribution(kind, pair):
    start, values = pair
    if kind is RegretKind.RM_PLUS:
        start = np.maximum(start, 0)
    sigma = policy_from_state(update(RegretState(start, kind), values))
    assert np.all(sigma >= 0)
    assert sigma.sum() == pytest.approx(1.0, abs=1e-12)


@given(st.integers(2, 5).flatmap(lambda n: st.lists(vectors(n), min_size=1, max_size=40)))
def test_rm_plus_stays_non_negative(seq):
    state = RegretState.zeros(len(seq[0]), RegretKind.RM_PLUS)
    for v in seq:
        state = update(state, v)
        assert np.all(state.stored >= 0)


@given(st.sampled_from(KINDS), st.integers(2, 5).flatmap(lambda n: st.lists(vectors(n), min_size=1, max_size=60)))
def test_improvement_each_step(kind, seq):
    state = RegretState.zeros(len(seq[0]), kind)
    for v in seq:
        nxt = update(state, v)
        assert policy_from_state(nxt) @ v >= policy_from_state(state) @ v - 1e-12
        state = nxt


@given(st.sampled_from(KINDS), st.integers(2, 5).flatmap(lambda n: st.lists(vectors(n), min_size=1, max_size=60)))
def test_positive_entry_persists(kind, seq):
    state = RegretState.zeros(len(seq[0]), kind)
    seen = False
    for v in seq:
        seen = seen or state.has_positive
        state = update(state, v)
        if seen:
            assert state.has_positive


@given(st.integers(2, 5).flatmap(lambda n: st.lists(vectors(n), min_size=1, max_size=60)))
def test_monotone_increments(seq):
    for kind in KINDS:
        state = RegretState.zeros(len(seq[0]), kind)
        for v in seq:
            nxt = update(state, v)
            gain = v - policy_from_state(state) @ v
            delta = np.maximum(nxt.stored, 0) - np.maximum(state.stored, 0)
            assert np.all(delta * gain >= -1e-12)
            state = nxt


@pytest.mark.parametrize("kind", KINDS)
def test_alternating_signs(kind):
    state = RegretState.zeros(2, kind)
    for t in range(50):
        v = np.array([1.0, -1.0]) if t % 2 else np.array([-1.0, 1.0])
        nxt = update(state, v)
        assert policy_from_state(nxt) @ v >= policy_from_state(state) @ v - 1e-12
        state = nxt


@pytest.mark.parametrize("kind", KINDS)
def test_uniform_to_uniform_is_equality(kind):
    # a constant value vector leaves zero regrets at zero: both policies uniform
    state = RegretState.zeros(3, kind)
    v = np.array([0.25, 0.25, 0.25])
    nxt = update(state, v)
    assert not nxt.has_positive
    assert policy_from_state(nxt) @ v == policy_from_state(state) @ v


@pytest.mark.parametrize("seed", range(20))
def test_external_regret_sanity(seed):
    rng = np.random.default_rng(seed)
    n, T = 2 + seed % 4, 2000
    state = RegretState.zeros(n)
    for t in range(1, T + 1):
        state = update(state, rng.uniform(-1, 1, n))
        assert state.stored.max() <= 2.0 * np.sqrt(n * t) + 1e-9


@given(st.integers(0, 2**32 - 1), st.sampled_from(KINDS))
def test_segment_ops_match_per_infoset(seed, kind):
    rng = np.random.default_rng(seed)
    sizes = rng.integers(1, 5, size=rng.integers(1, 6))
    segments = np.repeat(np.arange(len(sizes)), sizes)
    stored = rng.uniform(-1, 1, segments.size)
    stored[rng.random(stored.size) < 0.3] = 0.0
    if kind is RegretKind.RM_PLUS:
        stored = np.maximum(stored, 0)
    values = rng.uniform(-1, 1, segments.size)
    got_policy = segment_policies(stored, segments, sizes)
    got_stored = segment_update(stored, values, segments, sizes, kind)
    start = 0
    for n in sizes:
        block = slice(start, start + n)
        state = RegretState(stored[block], kind)
        np.testing.assert_allclose(got_policy[block], policy_from_state(state), rtol=0, atol=1e-15)
        np.testing.assert_allclose(got_stored[block], update(state, values[block]).stored, rtol=0, atol=1e-14)
        start += n
