from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from aitbench.errors import InsufficientBits, ParseError
from aitbench.foundation import (
    Interval,
    binary_prefix,
    floor_log2,
    format_fraction,
    interval_pow2,
    interval_sum,
    is_prefix_free,
    ln2_interval,
    log2_interval,
    nat_to_string,
    parse_fraction,
    pf_membership,
    point_value,
    power_interval,
    rational_root_interval,
    string_key,
    string_to_nat,
    strings_upto,
)

mpmath.mp.prec = 400

rationals = st.fractions(min_value=0, max_value=50, max_denominator=1000)


def test_string_to_nat_examples():
    assert string_to_nat("") == 0
    assert string_to_nat("00") == 3
    assert string_to_nat("101") == 12


def test_nat_to_string_examples():
    assert nat_to_string(0) == ""
    assert nat_to_string(3) == "00"
    assert [nat_to_string(i) for i in range(7)] == ["", "0", "1", "00", "01", "10", "11"]


def test_bijection_is_order_preserving_up_to_16_bits():
    # strings_upto yields the standard order, so the numbering must be 0, 1, 2, ...
    for i, s in enumerate(strings_upto(16)):
        assert string_to_nat(s) == i
        assert nat_to_string(i) == s


def test_string_key_orders_by_length_then_lexicographically():
    words = ["11", "", "0", "000", "10", "1"]
    assert sorted(words, key=string_key) == ["", "0", "1", "10", "11", "000"]


def test_binary_prefix_examples():
    assert binary_prefix(Fraction(5, 8), 6) == "101000"
    assert binary_prefix(Fraction(7, 4), -3) == ""
    assert binary_prefix(Fraction(1, 3), 4) == "0101"


def test_binary_prefix_uses_fractional_part():
    assert binary_prefix(Fraction(7, 4), 3) == "110"
    assert binary_prefix(Fraction(3), 4) == "0000"


@given(rationals, st.integers(0, 24), st.integers(0, 24))
def test_binary_prefix_is_consistent_across_lengths(alpha, n, m):
    n, m = sorted((n, m))
    assert binary_prefix(alpha, m).startswith(binary_prefix(alpha, n))


@given(st.integers(0, 255), st.integers(0, 8), st.integers(0, 24))
def test_dyadic_prefix_pads_with_zeros(k, j, n):
    alpha = Fraction(k % (1 << j) if j else 0, 1 << j)
    bits = binary_prefix(alpha, n)
    assert set(bits[j:]) <= {"0"}


def test_interval_pow2_integer_exponents_are_exact():
    assert interval_pow2(-3, 10) == Interval.point(Fraction(1, 8))
    assert interval_pow2(0, 10) == Interval.point(1)


def test_interval_pow2_square_root():
    iv = interval_pow2(Fraction(-1, 2), 20)
    assert iv.width <= Fraction(1, 1 << 20)
    assert iv.lo ** 2 <= Fraction(1, 2) <= iv.hi ** 2


def test_interval_pow2_requires_positive_precision():
    with pytest.raises(ValueError):
        interval_pow2(Fraction(1, 2), 0)


@given(st.fractions(min_value=-20, max_value=20, max_denominator=12), st.integers(1, 80))
def test_interval_pow2_encloses_reference(q, precision):
    iv = interval_pow2(q, precision)
    assert iv.width <= Fraction(1, 1 << precision)
    ref = mpmath.power(2, mpmath.mpf(q.numerator) / q.denominator)
    assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= ref
    assert ref <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator


@given(st.fractions(min_value=-6, max_value=6, max_denominator=7),
       st.fractions(min_value=-6, max_value=6, max_denominator=7))
def test_interval_pow2_monotone_up_to_widths(q1, q2):
    q1, q2 = sorted((q1, q2))
    a, b = interval_pow2(q1, 30), interval_pow2(q2, 30)
    assert a.lo <= b.hi
    if q1 < q2 and q1.denominator == q2.denominator == 1:
        assert a.hi < b.lo


def test_rational_root_exact_and_inexact():
    assert rational_root_interval(Fraction(27, 8), 3, 10) == Interval.point(Fraction(3, 2))
    iv = rational_root_interval(2, 2, 40)
    assert iv.lo ** 2 < 2 < iv.hi ** 2


def test_power_interval_negative_base_rejected():
    with pytest.raises(ValueError):
        power_interval(0, Fraction(1, 2), 10)


def test_is_prefix_free_examples():
    assert is_prefix_free([])
    assert is_prefix_free({"0", "10", "11"})
    assert not is_prefix_free({"0", "01"})


@given(st.sets(st.text("01", max_size=6), max_size=12))
def test_is_prefix_free_matches_pairwise_check(words):
    brute = not any(a != b and b.startswith(a) for a in words for b in words)
    assert is_prefix_free(words) == brute


def test_pf_membership_examples():
    assert pf_membership("101000", "")
    assert pf_membership("101000", "101")
    assert not pf_membership("101000", "11")
    with pytest.raises(InsufficientBits):
        pf_membership("10", "100")


def test_fraction_format_round_trip():
    for x in [Fraction(0), Fraction(-3, 7), Fraction(5), Fraction(22, 6)]:
        assert parse_fraction(format_fraction(x)) == x
    assert format_fraction(Fraction(5)) == "5/1"
    with pytest.raises(ParseError):
        parse_fraction("1/0")
    with pytest.raises(ParseError):
        parse_fraction("x")


@given(st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6))
def test_floor_log2(x):
    e = floor_log2(x)
    assert Fraction(2) ** e <= x < Fraction(2) ** (e + 1)


@given(st.lists(st.tuples(st.integers(-30, 0), st.integers(0, 5)), min_size=1, max_size=10))
def test_interval_sum_soundness_on_integer_exponents(terms):
    exact = sum(c * Fraction(2) ** q for q, c in terms)
    iv = interval_sum(interval_pow2(q, 16) * c for q, c in terms)
    assert iv.contains(exact)
    assert iv.is_point


def test_interval_arithmetic():
    a = Interval(1, 2)
    b = Interval(-1, 3)
    assert a + b == Interval(0, 5)
    assert a - b == Interval(-2, 3)
    assert a * b == Interval(-2, 6)
    assert 1 - a == Interval(-1, 0)
    assert a / Interval(2, 4) == Interval(Fraction(1, 4), 1)
    with pytest.raises(ZeroDivisionError):
        a / b
    assert Interval(Fraction(1, 3), Fraction(1, 3)).round_out(4) == Interval(Fraction(5, 16),
                                                                           Fraction(6, 16))


@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000),
       st.integers(1, 60))
def test_log2_interval_encloses_reference(x, bits):
    iv = log2_interval(x, bits)
    assert iv.width <= Fraction(1, 1 << bits)
    ref = mpmath.log(mpmath.mpf(x.numerator) / x.denominator, 2)
    assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= ref
    assert ref <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator


def test_log2_of_powers_of_two_is_exact():
    assert log2_interval(Fraction(1, 8), 30) == Interval.point(-3)


def test_ln2_interval():
    iv = ln2_interval(100)
    ref = mpmath.log(2)
    assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= ref
    assert ref <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator
    assert iv.width <= Fraction(1, 1 << 99)


def test_point_value():
    assert point_value("101") == Fraction(5, 8)
    assert point_value("") == 0
