import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hyperpoly.combinat import (
    Alpha,
    Subset,
    all_subsets,
    core_index_set,
    enumerate_shorts,
    format_rational,
    is_long,
    is_short,
    parse_rational,
    subset_markers,
    validate_alpha,
)
from hyperpoly.errors import (
    DimensionMismatch,
    EmptySubset,
    FullSubset,
    NonGenericAlpha,
    NonPositiveLength,
    ParseError,
    TooFewEdges,
)


def S(n, *elems):
    return Subset.of(n, elems)


def brute_generic(lengths):
    total = sum(lengths)
    for r in range(len(lengths) + 1):
        for c in itertools.combinations(range(len(lengths)), r):
            if 2 * sum(lengths[i] for i in c) == total:
                return False
    return True


def brute_shorts(lengths, min_size):
    n = len(lengths)
    total = sum(lengths)
    out = []
    for r in range(min_size, n + 1):
        for c in itertools.combinations(range(1, n + 1), r):
            if 2 * sum(lengths[i - 1] for i in c) < total:
                out.append(list(c))
    return out


class TestValidate:
    def test_example_generic(self):
        a = validate_alpha(["1", "1", "3", "3", "3"])
        assert a.n == 5 and a.total == 11

    def test_symmetric_split_rejected_with_witness(self):
        with pytest.raises(NonGenericAlpha) as exc:
            validate_alpha(["1", "1", "1", "1"])
        assert exc.value.witness == S(4, 1, 2)

    def test_small_generic(self):
        a = validate_alpha(["1", "1", "1", "2"])
        assert a.n == 4 and a.total == 5

    def test_rationals(self):
        a = validate_alpha(["1/2", "2/3", "1"])
        assert a[1] == Fraction(1, 2)
        assert a.to_json() == ["1/2", "2/3", "1"]

    @pytest.mark.parametrize("bad, err", [
        (["1", "0", "1"], NonPositiveLength),
        (["1", "-2", "4"], NonPositiveLength),
        (["1", "2"], TooFewEdges),
        (["1", "x", "2"], ParseError),
        (["1", "1/0", "2"], ParseError),
    ])
    def test_errors(self, bad, err):
        with pytest.raises(err):
            validate_alpha(bad)

    @given(st.lists(st.integers(1, 9), min_size=3, max_size=8))
    def test_genericity_matches_brute_force(self, lengths):
        if brute_generic(lengths):
            assert validate_alpha(lengths).n == len(lengths)
        else:
            with pytest.raises(NonGenericAlpha) as exc:
                validate_alpha(lengths)
            w = exc.value.witness
            assert 2 * sum(lengths[i - 1] for i in w) == sum(lengths)


def test_rational_round_trip():
    for text in ["3", "7/4", "-2/6"]:
        assert parse_rational(format_rational(parse_rational(text))) == parse_rational(text)
    assert format_rational(Fraction(-1, 3)) == "-1/3"


class TestSubset:
    def test_ops(self):
        a, b = S(5, 1, 2), S(5, 2, 3)
        assert (a | b) == S(5, 1, 2, 3)
        assert (a & b) == S(5, 2)
        assert (a - b) == S(5, 1)
        assert a.complement() == S(5, 3, 4, 5)
        assert repr(a) == "{1,2}" and a.to_json() == [1, 2]
        assert 2 in a and 3 not in a and len(a) == 2

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            S(4, 1) | S(5, 1)
        with pytest.raises(DimensionMismatch):
            S(3, 4)

    def test_order(self):
        subs = all_subsets(3)
        assert [s.to_json() for s in subs] == [[], [1], [2], [3], [1, 2], [1, 3], [2, 3], [1, 2, 3]]


class TestShorts:
    a = validate_alpha([1, 1, 3, 3, 3])

    def test_examples(self):
        assert is_short(self.a, S(5, 1, 2))
        assert not is_short(self.a, S(5, 3, 4))
        assert is_short(self.a, S(5))

    def test_enumerate_example(self):
        got = [s.to_json() for s in enumerate_shorts(self.a, 2)]
        assert got == [[1, 2], [1, 3], [1, 4], [1, 5], [2, 3], [2, 4], [2, 5], [1, 2, 3], [1, 2, 4], [1, 2, 5]]
        assert core_index_set(self.a) == enumerate_shorts(self.a, 2)
        assert enumerate_shorts(self.a, 5) == []

    def test_enumerate_small(self):
        a = validate_alpha([1, 1, 1, 2])
        got = [s.to_json() for s in enumerate_shorts(a, 1)]
        assert got == [[1], [2], [3], [4], [1, 2], [1, 3], [2, 3]]

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            is_short(self.a, S(4, 1))

    @given(st.lists(st.integers(1, 12), min_size=3, max_size=9), st.integers(0, 4))
    def test_properties(self, lengths, k):
        if not brute_generic(lengths):
            return
        a = validate_alpha(lengths)
        k = min(k, a.n)
        shorts = enumerate_shorts(a, k)
        assert [s.to_json() for s in shorts] == brute_shorts(lengths, k)
        for s in all_subsets(a.n):
            assert is_short(a, s) != is_short(a, s.complement())
            assert is_long(a, s) == (not is_short(a, s))
        short_set = set(enumerate_shorts(a, 0))
        for s in short_set:
            for t in all_subsets(a.n):
                if t.issubset(s):
                    assert t in short_set
        assert len(enumerate_shorts(a, 1)) + 1 == len(short_set)
        assert len(short_set) == 2 ** (a.n - 1)


class TestMarkers:
    def test_examples(self):
        m = subset_markers(S(5, 2, 4))
        assert (m.m, m.n, m.s_bar, m.sc_bar) == (2, 1, S(5, 4), S(5, 3, 5))
        m = subset_markers(S(4, 1, 2))
        assert (m.m, m.n, m.s_bar, m.sc_bar) == (1, 3, S(4, 2), S(4, 4))
        m = subset_markers(S(5, 1))
        assert (m.m, m.n, m.s_bar, m.sc_bar) == (1, 2, S(5), S(5, 3, 4, 5))

    def test_errors(self):
        with pytest.raises(EmptySubset):
            subset_markers(S(4))
        with pytest.raises(FullSubset):
            subset_markers(Subset.full(4))


def test_alpha_permuted():
    a = validate_alpha([1, 2, 3, 5])
    b = a.permuted({1: 2, 2: 1, 3: 3, 4: 4})
    assert b.lengths == (Fraction(2), Fraction(1), Fraction(3), Fraction(5))
    assert isinstance(b, Alpha)
