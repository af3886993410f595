"""Code space ordering, metric, and prefix algebra tests."""

import itertools

import pytest
from hypothesis import given, strategies as st

from fractops import (
    EQUAL,
    GREATER,
    LESS,
    MAX_DEPTH,
    ReverseAccumulator,
    acc_push,
    code_metric,
    concat,
    format_address,
    parse_address,
    shift,
    tops_compare,
)

prefix = st.lists(st.integers(1, 4), max_size=8).map(tuple)


def test_compare_smaller_symbol_is_greater():
    assert tops_compare((2,), (1,)) == LESS


def test_compare_equal():
    assert tops_compare((1, 3), (1, 3)) == EQUAL


def test_compare_padding_rule():
    # "1" padded with ones beats "12" at index 2
    assert tops_compare((1,), (1, 2)) == GREATER


def test_empty_prefix_is_maximum():
    assert tops_compare((), (1, 1, 1)) == EQUAL
    assert tops_compare((), (2,)) == GREATER


def test_metric_identical():
    assert code_metric((3, 1, 2), (3, 1, 2)) == 0.0


def test_metric_first_symbol():
    assert code_metric((1, 3), (2, 3)) == 0.5


def test_metric_third_symbol():
    assert code_metric((1, 1, 2), (1, 1, 1)) == 0.125


def test_shift():
    assert shift((2, 4, 1, 3)) == (4, 1, 3)


def test_shift_empty():
    assert shift(()) == ()


def test_shift_single():
    assert shift((7,)) == ()


def test_concat():
    assert concat((3,), (1, 2)) == (3, 1, 2)
    assert concat((), (1, 2)) == (1, 2)
    assert concat((1, 2), ()) == (1, 2)


def test_concat_truncates_at_max_depth():
    long = tuple(1 for _ in range(MAX_DEPTH))
    assert len(concat((2,), long, MAX_DEPTH)) == MAX_DEPTH
    assert concat((2,), long, MAX_DEPTH)[0] == 2


def test_parse_format_round_trip():
    assert parse_address("312") == (3, 1, 2)
    assert format_address((3, 1, 2)) == "312"
    assert parse_address("") == ()


@given(prefix)
def test_format_parse_identity(p):
    assert parse_address(format_address(p)) == p


def test_accumulator_single_push():
    acc = acc_push(ReverseAccumulator(4), 3)
    assert acc.read() == (3,)


def test_accumulator_most_recent_first():
    acc = ReverseAccumulator(4)
    acc = acc_push(acc, 2)
    acc = acc_push(acc, 1)
    assert acc.read() == (1, 2)


def test_accumulator_ring_truncation():
    acc = ReverseAccumulator(3)
    for sym in (1, 2, 3, 4):
        acc = acc_push(acc, sym)
    assert acc.read() == (4, 3, 2)


@given(prefix, prefix)
def test_compare_antisymmetric(p, q):
    assert tops_compare(p, q) == -tops_compare(q, p)


@given(prefix, prefix)
def test_metric_symmetric(p, q):
    assert code_metric(p, q) == code_metric(q, p)
    assert (code_metric(p, q) == 0.0) == (tops_compare(p, q) == EQUAL)


@given(prefix, prefix, prefix)
def test_metric_ultrametric(p, q, r):
    assert code_metric(p, r) <= max(code_metric(p, q), code_metric(q, r))


def test_order_agrees_with_padded_reverse_lexicographic():
    # exhaustive at short length: pad with 1s, smaller symbol wins
    prefixes = [
        t for k in range(4) for t in itertools.product((1, 2, 3), repeat=k)
    ]
    for p in prefixes:
        for q in prefixes:
            kp = p + (1,) * (3 - len(p))
            kq = q + (1,) * (3 - len(q))
            if kp == kq:
                want = EQUAL
            else:
                want = GREATER if kp < kq else LESS
            assert tops_compare(p, q) == want
