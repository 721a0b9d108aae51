from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qverma.qscalars import (
    Params,
    add_content,
    bracket_is_zero,
    cartan_pairing,
    fixed_profile,
    format_rational,
    mu_power,
    parse_rational,
    q_bracket_from_power,
    q_factorial,
    q_int,
    q_power_of_weight,
    root_content,
)

nonunit_q = st.fractions(min_value=Fraction(-9), max_value=Fraction(9), max_denominator=9).filter(
    lambda x: x not in (0, 1, -1)
)


def test_small_values():
    p = fixed_profile(1)
    assert q_int(p, 0) == 0
    assert q_int(p, 1) == 1
    assert q_int(p, 2) == Fraction(5, 2)
    assert q_factorial(p, 3) == Fraction(105, 8)
    assert q_factorial(p, 0) == 1


@given(nonunit_q, st.integers(-6, 6))
def test_bracket_is_odd_and_antisymmetric(q, k):
    p = Params(1, q, (Fraction(3),))
    assert q_int(p, -k) == -q_int(p, k)
    assert q_bracket_from_power(p, q**k) == q_int(p, k)


@given(nonunit_q, st.integers(1, 6), st.integers(1, 6))
def test_bracket_addition(q, a, b):
    # [a + b] = q^{-b}[a] + q^{a}[b]
    p = Params(1, q, (Fraction(3),))
    assert q_int(p, a + b) == q ** (-b) * q_int(p, a) + q**a * q_int(p, b)


def test_zero_bracket_convention():
    assert bracket_is_zero(Fraction(1))
    assert bracket_is_zero(Fraction(-1))
    assert not bracket_is_zero(Fraction(2))


def test_cartan_pairing():
    assert cartan_pairing(2, 2) == 2
    assert cartan_pairing(1, 2) == cartan_pairing(2, 1) == -1
    assert cartan_pairing(1, 3) == 0
    with pytest.raises(IndexError):
        cartan_pairing(0, 1)
    with pytest.raises(IndexError):
        cartan_pairing(1, 4, n=3)


def test_weight_powers_follow_content():
    p = fixed_profile(2)
    assert q_power_of_weight(p, (0, 0), 1) == 3
    # mu = lambda - alpha_1: (mu, alpha_1) = lambda_1 - 2, (mu, alpha_2) = lambda_2 + 1
    assert q_power_of_weight(p, (1, 0), 1) == Fraction(3, 4)
    assert q_power_of_weight(p, (1, 0), 2) == 10
    assert mu_power(p, (0, 0), 1, 2) == 2 * 3 * 5
    with pytest.raises(ValueError):
        mu_power(p, (0, 0), 2, 1)


def test_contents():
    assert root_content(3, 2, 3) == (0, 1, 1)
    assert add_content((1, 2), (1, 1), -1) == (0, 1)


def test_params_validation():
    with pytest.raises(ValueError):
        Params(2, Fraction(1), (Fraction(2), Fraction(3)))
    with pytest.raises(ValueError):
        Params(2, Fraction(2), (Fraction(2),))
    with pytest.raises(ValueError):
        Params(1, Fraction(2), (Fraction(0),))
    assert Params(1, "3/2", ("5",)).q == Fraction(3, 2)


@pytest.mark.parametrize("bad", ["0.5", "1e3", "", "abc"])
def test_parse_rejects_inexact(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(st.fractions(max_denominator=1000))
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x
    assert "/" in format_rational(x)


def test_fixed_profile():
    p = fixed_profile(3)
    assert p.q == 2 and p.z == (3, 5, 7)
    assert p.describe() == {"n": 3, "q": "2/1", "z": ["3/1", "5/1", "7/1"]}
