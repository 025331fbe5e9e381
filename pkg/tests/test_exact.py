"""Exact-number core: cross-validated against literal Fraction arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from packbound.exact import (
    Exact,
    PrecisionError,
    decimal_str,
    fraction_str,
    parse_rational,
    power,
    rat,
)

small_rationals = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=120
)

# exponents small enough to expand literally, so Fraction is the oracle
terms_strategy = st.lists(
    st.tuples(
        st.sampled_from([10, 20]),
        st.integers(min_value=1, max_value=300),
        small_rationals,
    ),
    max_size=6,
)


def build(rational, terms):
    value = Exact(rational)
    for base, exp, coef in terms:
        value = value + power(base, exp, coef)
    return value


def literal(rational, terms):
    return rational + sum(Fraction(c) / Fraction(b) ** e for b, e, c in terms)


class TestAgainstLiteralFractions:
    @given(small_rationals, terms_strategy)
    @settings(max_examples=300)
    def test_sign_matches_fraction(self, q, terms):
        value = build(q, terms)
        expected = literal(q, terms)
        assert value.sign() == (expected > 0) - (expected < 0)

    @given(small_rationals, terms_strategy, small_rationals, terms_strategy)
    @settings(max_examples=300)
    def test_comparisons_match_fraction(self, q1, t1, q2, t2):
        a, b = build(q1, t1), build(q2, t2)
        fa, fb = literal(q1, t1), literal(q2, t2)
        assert (a < b) == (fa < fb)
        assert (a == b) == (fa == fb)
        assert (a >= b) == (fa >= fb)

    @given(small_rationals, terms_strategy, small_rationals, terms_strategy)
    @settings(max_examples=200)
    def test_add_sub_match_fraction(self, q1, t1, q2, t2):
        a, b = build(q1, t1), build(q2, t2)
        assert (a + b).as_fraction() == literal(q1, t1) + literal(q2, t2)
        assert (a - b).as_fraction() == literal(q1, t1) - literal(q2, t2)

    @given(small_rationals, terms_strategy, small_rationals)
    @settings(max_examples=200)
    def test_scalar_mul_matches_fraction(self, q, terms, scale):
        assert (build(q, terms) * scale).as_fraction() == literal(q, terms) * scale


class TestDeepExponents:
    """Comparisons must stay exact where literal expansion is impossible."""

    def test_huge_exponents_compare_by_dominance(self):
        e = 2**50
        a = rat(Fraction(1, 7)) + power(10, e)
        b = rat(Fraction(1, 7)) + power(10, e + 2)
        assert a > b > rat(Fraction(1, 7))
        assert (a - a).sign() == 0

    def test_rational_part_dominates_any_tiny_tail(self):
        e = 2**40
        total = rat(Fraction(6, 7)) + power(10, e, -1) + rat(Fraction(1, 7)) + power(10, e + 7)
        assert total < 1
        total2 = rat(Fraction(6, 7)) + power(10, e, -1) + rat(Fraction(1, 7)) + power(10, e - 4)
        assert total2 > 1

    def test_cancellation_inside_cluster(self):
        e = 2**45
        s = power(10, e) + power(10, e + 2, Fraction(1, 2)) - power(10, e)
        assert s.sign() == 1
        assert (s - power(10, e + 2, Fraction(1, 2))).sign() == 0

    def test_cross_base_order(self):
        # base-20 term with an exponent at least as large is always smaller
        assert power(20, 100) < power(10, 100)
        assert power(20, 2**30) < power(10, 2**29)
        # literal settlement inside the ambiguous band
        assert power(20, 5) < power(10, 6)  # 20^-5 = 1/3.2e6 < 1e-6
        assert power(20, 10) > power(10, 14)

    def test_unexpandable_fraction_raises(self):
        with pytest.raises(PrecisionError):
            (rat(1) + power(10, 2**40)).as_fraction()


class TestCanonicalForm:
    @given(st.integers(min_value=-10**6, max_value=10**6), st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=200)
    def test_rational_lowest_terms(self, num, den):
        from math import gcd

        q = rat(Fraction(num, den)).rational_part
        assert q.denominator > 0
        assert gcd(abs(q.numerator), q.denominator) == 1

    def test_zero_coefficients_dropped(self):
        v = power(10, 50) - power(10, 50)
        assert v.terms == ()
        assert v == 0

    def test_rejects_bad_terms(self):
        with pytest.raises(ValueError):
            power(2, 10)
        with pytest.raises(ValueError):
            power(10, 0)

    def test_hashable_and_equal(self):
        a = rat("1/7") + power(10, 99)
        b = rat(Fraction(1, 7)) + power(10, 99)
        assert a == b and hash(a) == hash(b)
        assert len({a, b}) == 1


class TestFormatting:
    def test_parse_and_render_rational(self):
        assert parse_rational("87/62") == Fraction(87, 62)
        assert parse_rational("-3") == Fraction(-3)
        assert fraction_str(Fraction(87, 62)) == "87/62"
        assert fraction_str(Fraction(4)) == "4"

    @pytest.mark.parametrize(
        "value,expected",
        [
            (Fraction(87, 62), "1.40322580645"),
            (Fraction(17, 12), "1.41666666667"),
            (Fraction(1, 3), "0.333333333333"),
            (Fraction(2), "2"),
            (Fraction(-1, 8), "-0.125"),
            (Fraction(10**15), "1e+15"),
            (Fraction(1, 10**15), "1e-15"),
        ],
    )
    def test_decimal_rendering(self, value, expected):
        assert decimal_str(value) == expected

    def test_decimal_half_even(self):
        # 0.5 ulp ties round to the even digit at 12 significant places
        assert decimal_str(Fraction(123456789012_5, 10**13)) == "0.123456789012"
        assert decimal_str(Fraction(123456789011_5, 10**13)) == "0.123456789012"
        assert decimal_str(Fraction(123456789013_5, 10**13)) == "0.123456789014"

    def test_exact_string_roundtrip_info(self):
        v = rat("1/7") + power(10, 64) - power(20, 200, Fraction(3, 2))
        s = str(v)
        assert "1/7" in s and "10^-64" in s and "20^-200" in s
        j = v.to_json()
        assert j["rational"] == "1/7"
        assert {t["base"] for t in j["tiny"]} == {10, 20}
