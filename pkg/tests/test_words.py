import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexshift.words import (
    ConstantWordError,
    EpSeq,
    Ordering,
    balance_stats,
    compare,
    cyclic_extremes,
    distinct_shifts,
    factor_split,
    mirror,
    parse_seq,
    pow_word,
    run_stats,
    seq,
    shift,
    zero_max,
)

from .oracles import naive_balanced, naive_compare, naive_one_min, naive_zero_max, naive_run, expand

words_st = st.text(alphabet="01", min_size=1, max_size=8)
seqs_st = st.builds(
    EpSeq,
    st.text(alphabet="01", max_size=6),
    st.text(alphabet="01", min_size=1, max_size=6),
)


def test_canonical_forms():
    assert str(EpSeq("100", "10")) == "10|01"
    assert str(EpSeq("1", "11")) == "|1"
    assert str(EpSeq("", "0101")) == "|01"
    assert str(EpSeq("10", "01")) == "10|01"
    # same sequence, two spellings, one canonical value
    assert EpSeq("100", "10") == EpSeq("10", "01")


def test_literal_round_trip():
    for lit in ["|110", "10|01", "|1", "0|01"]:
        assert str(parse_seq(lit)) == lit
    with pytest.raises(ValueError):
        parse_seq("110")
    with pytest.raises(ValueError):
        parse_seq("10|")
    with pytest.raises(ValueError):
        parse_seq("1a|0")


def test_compare_examples():
    assert compare(seq("|10"), seq("|11")) is Ordering.LESS
    # first difference at the fifth symbol once both are expanded
    assert compare(seq("1|10"), seq("|110")) is Ordering.LESS
    assert expand("1", "10", 5) == "11010"
    assert expand("", "110", 5) == "11011"
    assert compare(seq("|110"), seq("|110")) is Ordering.EQUAL


def test_shift_examples():
    assert shift(seq("|110"), 1) == seq("|101")
    assert shift(seq("0|10"), 1) == seq("|10")
    assert shift(seq("01|110"), 3) == seq("|101")


def test_distinct_shift_count_bound():
    x = seq("01|110")
    shifts = distinct_shifts(x)
    assert len(shifts) == len(set(shifts)) <= 5


def test_mirror_examples():
    assert mirror(seq("|110")) == seq("|001")
    assert mirror(seq("10|01")) == seq("01|10")
    assert mirror("0110") == "1001"


def test_cyclic_extremes_examples():
    ext = cyclic_extremes("0110")
    assert (ext.max, ext.min, ext.zero_max, ext.one_min) == ("1100", "0011", "0110", "1001")
    ext = cyclic_extremes("100")
    assert (ext.max, ext.min, ext.zero_max, ext.one_min) == ("100", "001", "010", "100")
    assert cyclic_extremes("1").zero_max is None
    with pytest.raises(ConstantWordError):
        zero_max("11")


def test_factor_split_examples():
    assert factor_split("01010") == ("010", "10")
    assert factor_split("0110") == ("01", "10")
    assert factor_split("01") == ("0", "1")


def test_balance_stats_examples():
    s = balance_stats("01011")
    assert (s.ones, s.one_ratio) == (3, Fraction(3, 5))
    assert balance_stats("010").cyclically_balanced
    assert not balance_stats("0110").cyclically_balanced


def test_run_stats_examples():
    r = run_stats(seq("|110"))
    assert (r.max_zero_run, r.max_one_run) == (1, 2)
    assert run_stats(seq("|0")).max_zero_run == math.inf
    r = run_stats(seq("10|100"))
    assert (r.max_zero_run, r.max_one_run) == (2, 1)


@given(seqs_st, seqs_st)
def test_compare_matches_oracle(x, y):
    got = compare(x, y)
    want = naive_compare((x.preperiod, x.period), (y.preperiod, y.period))
    assert got.value == want


@given(seqs_st)
def test_compare_reflexive(x):
    assert compare(x, x) is Ordering.EQUAL


@given(seqs_st, seqs_st, seqs_st)
def test_compare_transitive(x, y, z):
    le = lambda a, b: compare(a, b) is not Ordering.GREATER
    if le(x, y) and le(y, z):
        assert le(x, z)


@given(seqs_st, st.integers(0, 20), st.integers(0, 20))
def test_shift_composes(x, m, n):
    assert shift(x, m + n) == shift(shift(x, m), n)


@given(seqs_st, seqs_st)
def test_mirror_reverses_order(x, y):
    if compare(x, y) is Ordering.LESS:
        assert compare(mirror(y), mirror(x)) is Ordering.LESS


@given(words_st)
def test_extremes_endings(w):
    ext = cyclic_extremes(w)
    assert ext.zero_max == naive_zero_max(w)
    assert ext.one_min == naive_one_min(w)
    if len(set(w)) == 2:
        assert ext.max.endswith("0")
        assert ext.min.endswith("1")


def test_factor_split_round_trip_exhaustive():
    for n in range(2, 13):
        for bits in product("01", repeat=n):
            w = "".join(bits)
            if len(set(w)) < 2:
                continue
            u, v = factor_split(w)
            assert u[0] == "0" and v[0] == "1"
            ext = cyclic_extremes(w)
            assert u + v == ext.zero_max
            assert v + u == ext.one_min


@given(words_st)
def test_balanced_matches_oracle(w):
    assert balance_stats(w).balanced == naive_balanced(w)
    assert balance_stats(w).cyclically_balanced == naive_balanced(w + w)


def test_cyclically_balanced_same_ratio_are_rotations():
    # two coprime-ratio cyclically balanced words of the same length and
    # ones count are rotations of each other
    for q in range(2, 11):
        classes: dict[int, set[str]] = {}
        for bits in product("01", repeat=q):
            w = "".join(bits)
            p = w.count("1")
            if 0 < p < q and math.gcd(p, q) == 1 and balance_stats(w).cyclically_balanced:
                classes.setdefault(p, set()).add(w)
        for p, ws in classes.items():
            rep = next(iter(ws))
            rots = {rep[i:] + rep[:i] for i in range(q)}
            assert ws <= rots


@given(seqs_st)
def test_run_stats_match_long_scan(x):
    r = run_stats(x)
    horizon = expand(x.preperiod, x.period, len(x.preperiod) + 6 * len(x.period) + 12)
    if r.max_zero_run != math.inf:
        assert r.max_zero_run == naive_run(horizon, "0")
    if r.max_one_run != math.inf:
        assert r.max_one_run == naive_run(horizon, "1")
