"""Core value types: bits, bit strings, extended ratios, oracles."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ivbet.core import (
    BitString,
    ExtRatio,
    PeriodicOracle,
    PrefixOracle,
    SeededOracle,
    as_bit,
    bits,
    flip,
    parse_oracle,
    ratio_cmp,
)

bit_lists = st.lists(st.integers(min_value=0, max_value=1), max_size=40)


def test_as_bit_accepts_only_bits():
    assert as_bit(0) == 0 and as_bit(1) == 1
    for bad in (-1, 2, 7):
        with pytest.raises(ValueError):
            as_bit(bad)


def test_flip_is_an_involution():
    for b in (0, 1):
        assert flip(flip(b)) == b
    assert flip(0) == 1 and flip(1) == 0


class TestBitString:
    def test_empty_is_unique_length_zero(self):
        assert len(BitString()) == 0
        assert BitString() == bits("")
        assert str(BitString()) == ""

    def test_from_str_round_trip(self):
        s = bits("01101")
        assert str(s) == "01101"
        assert list(s) == [0, 1, 1, 0, 1]
        with pytest.raises(ValueError):
            bits("012")

    def test_extend_and_concat(self):
        s = bits("01")
        assert s.extend(1) == bits("011")
        assert bits("01") + bits("10") == bits("0110")

    def test_restrict_bounds(self):
        s = bits("0110")
        assert s.restrict(0) == BitString()
        assert s.restrict(4) == s
        with pytest.raises(ValueError):
            s.restrict(5)
        with pytest.raises(ValueError):
            s.restrict(-1)

    def test_hashable_and_usable_as_key(self):
        d = {bits("010"): 1}
        assert d[BitString([0, 1, 0])] == 1

    @given(bit_lists, st.data())
    def test_restriction_is_a_prefix_and_recombines(self, values, data):
        s = BitString(values)
        n = data.draw(st.integers(min_value=0, max_value=len(s)))
        head = s.restrict(n)
        assert head.is_prefix_of(s)
        assert head + s.suffix_from(n) == s

    @given(bit_lists, bit_lists)
    def test_prefix_relation_matches_definition(self, a, b):
        sa, sb = BitString(a), BitString(b)
        assert sa.is_prefix_of(sb) == (list(a) == list(b)[: len(a)])


class TestExtRatio:
    def test_positive_beats_zero(self):
        assert ratio_cmp(ExtRatio(2, 5), ExtRatio(0, 1)) == 1

    def test_all_infinite_values_are_equal(self):
        # any n/0 is infinite, 0/0 included
        assert ratio_cmp(ExtRatio(3, 0), ExtRatio(7, 0)) == 0
        assert ratio_cmp(ExtRatio(0, 0), ExtRatio(5, 0)) == 0

    def test_equivalent_fractions_compare_equal(self):
        assert ratio_cmp(ExtRatio(1, 2), ExtRatio(2, 4)) == 0
        assert ExtRatio(1, 2) == ExtRatio(2, 4)

    def test_infinite_is_the_unique_maximum(self):
        assert ExtRatio(1000000, 1) < ExtRatio(0, 0)
        assert ExtRatio(1, 0) > ExtRatio(10**30, 1)

    def test_negative_components_rejected(self):
        with pytest.raises(ValueError):
            ExtRatio(-1, 2)
        with pytest.raises(ValueError):
            ExtRatio(1, -2)

    def test_exhaustive_agreement_with_fractions_small(self):
        # cross-multiplication must agree with exact rational comparison
        for a in range(0, 9):
            for b in range(1, 9):
                for c in range(0, 9):
                    for d in range(1, 9):
                        want = (Fraction(a, b) > Fraction(c, d)) - (Fraction(a, b) < Fraction(c, d))
                        assert ratio_cmp(ExtRatio(a, b), ExtRatio(c, d)) == want

    @given(
        st.integers(min_value=0, max_value=10**6),
        st.integers(min_value=1, max_value=10**6),
        st.integers(min_value=0, max_value=10**6),
        st.integers(min_value=1, max_value=10**6),
    )
    def test_agreement_with_fractions_random(self, a, b, c, d):
        want = (Fraction(a, b) > Fraction(c, d)) - (Fraction(a, b) < Fraction(c, d))
        assert ratio_cmp(ExtRatio(a, b), ExtRatio(c, d)) == want

    @given(st.integers(min_value=0, max_value=100), st.integers(min_value=0, max_value=100))
    def test_total_order_against_infinity(self, n, m):
        inf = ExtRatio(n, 0)
        assert ratio_cmp(inf, ExtRatio(m, 0)) == 0
        if m > 0:
            assert ratio_cmp(inf, ExtRatio(n, m)) == 1


class TestOracles:
    def test_periodic_pattern(self):
        a = PeriodicOracle("01")
        assert a.bit(0) == 0
        assert a.bit(5) == 1
        assert str(a.prefix(6)) == "010101"

    def test_periodic_rejects_bad_patterns(self):
        with pytest.raises(ValueError):
            PeriodicOracle("")
        with pytest.raises(ValueError):
            PeriodicOracle("01x")

    def test_seeded_is_deterministic(self):
        a = SeededOracle(99)
        b = SeededOracle(99)
        assert a.bit(17) == a.bit(17) == b.bit(17)
        assert [a.bit(i) for i in range(64)] == [b.bit(i) for i in range(64)]

    def test_seeded_seeds_differ(self):
        a, b = SeededOracle(1), SeededOracle(2)
        assert [a.bit(i) for i in range(128)] != [b.bit(i) for i in range(128)]

    def test_seeded_range(self):
        with pytest.raises(ValueError):
            SeededOracle(-1)
        with pytest.raises(ValueError):
            SeededOracle(2**64)

    def test_prefix_appends_fallback(self):
        a = PrefixOracle(bits("0011"), PeriodicOracle("1"))
        assert str(a.prefix(7)) == "0011111"
        b = PrefixOracle(bits("111"), PeriodicOracle("01"))
        # fallback indexing restarts after the prefix
        assert str(b.prefix(7)) == "1110101"

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            PeriodicOracle("01").bit(-1)

    @pytest.mark.parametrize(
        "descriptor",
        ["periodic:01", "seed:42", "prefix:0011:seed:7", "prefix:1:prefix:0:periodic:10"],
    )
    def test_descriptor_round_trip(self, descriptor):
        oracle = parse_oracle(descriptor)
        assert oracle.description == descriptor
        again = parse_oracle(oracle.description)
        assert [oracle.bit(i) for i in range(32)] == [again.bit(i) for i in range(32)]

    @pytest.mark.parametrize(
        "descriptor",
        ["", "bogus:1", "seed:abc", "periodic:", "periodic:21", "prefix:01", "seed:-1"],
    )
    def test_bad_descriptors_rejected(self, descriptor):
        with pytest.raises(ValueError):
            parse_oracle(descriptor)
