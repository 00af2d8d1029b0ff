import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from loqc_parity.rng import RngStream, keyed_uniforms, stream_keys


def test_same_stream_same_draws():
    a = RngStream(42, 3).random(100)
    b = RngStream(42, 3).random(100)
    assert np.array_equal(a, b)


def test_sequential_draws_continue_the_stream():
    s = RngStream(1)
    first = np.concatenate([s.random(10), s.random(5)])
    assert np.array_equal(first, RngStream(1).random(15))
    assert RngStream(1).random() == first[0]


def test_distinct_streams_and_domains_differ():
    base = RngStream(1, 0).random(50)
    assert not np.array_equal(base, RngStream(1, 1).random(50))
    assert not np.array_equal(base, RngStream(2, 0).random(50))
    assert not np.array_equal(base, RngStream(1, 0).spawn(5).random(50))


def test_uniform_moments():
    x = RngStream(2024).random(200_000)
    assert 0 <= x.min() and x.max() < 1
    assert abs(x.mean() - 0.5) < 4 * np.sqrt(1 / 12 / x.size)
    assert abs(x.var() - 1 / 12) < 0.002


def test_streams_uncorrelated():
    keys = stream_keys(9, np.arange(2))
    n = 100_000
    a = keyed_uniforms(np.repeat(keys[:1], n), np.arange(n))
    b = keyed_uniforms(np.repeat(keys[1:], n), np.arange(n))
    assert abs(np.corrcoef(a, b)[0, 1]) < 4 / np.sqrt(n)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**63 - 1), ids=st.lists(st.integers(0, 2**40), min_size=1, max_size=20))
def test_keyed_draws_are_pure(seed, ids):
    keys = stream_keys(seed, ids)
    counters = np.arange(len(ids))
    assert np.array_equal(keyed_uniforms(keys, counters), keyed_uniforms(keys.copy(), counters))
    one_by_one = [keyed_uniforms(stream_keys(seed, [i]), [c])[0] for i, c in zip(ids, counters)]
    assert np.array_equal(keyed_uniforms(keys, counters), one_by_one)
