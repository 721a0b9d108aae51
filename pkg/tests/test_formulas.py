import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qverma import formulas as fm
from qverma.freealg import TriangularArray
from qverma.qscalars import Params, fixed_profile, random_params, zero_content


def T(*rows):
    return TriangularArray.from_rows(rows)


def test_single_root_constant_frozen(p2):
    assert fm.C_km(p2, (0, 0), 1, 2) == Fraction(899, 45) * Fraction(16, 5) == Fraction(14384, 225)
    assert fm.root_power_pairing(p2, (0, 0), 1) == fm.C_km(p2, (0, 0), 1, 2)
    with pytest.raises(ValueError):
        fm.C_km(p2, (0, 0), 2, 1)


def test_weight_sequence():
    l = T([1, 1], [2])
    assert fm.weight_sequence(l) == [(0, 0), (2, 1), (2, 3)]


def test_rank_one_diagonal():
    p = fixed_profile(1)
    # B_k = [k]! [lambda][lambda - 1]...[lambda - k + 1]
    assert fm.B_total(p, T([2])) == Fraction(5, 2) * Fraction(16, 9) * Fraction(5, 9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_rank_two_product_equals_general_formula(seed, a, b, c):
    p = random_params(2, random.Random(seed))
    l = T([a, b], [c])
    assert fm.sl3_formula(p, l) == fm.B_total(p, l)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_reductions_at_random_points(seed):
    for n in (2, 3):
        assert fm.d_reductions_hold(random_params(n, random.Random(seed)), 4)


def test_reductions_need_rank_two():
    with pytest.raises(ValueError):
        fm.d_reductions_hold(fixed_profile(1))


def test_rank_one_d_is_the_last_branch():
    p = fixed_profile(1)
    # phi_1 = e_1 and e_1 f^l v = [l][lambda - l + 1] f^{l-1} v
    for l in range(1, 5):
        expect = fm.q_int(p, l) * fm.bracket(p, p.z[0] * p.q ** (1 - l))
        assert fm.D_il(p, 1, l) == expect


def test_d_validation(p2):
    with pytest.raises(IndexError):
        fm.D_il(p2, 3, 1)
    with pytest.raises(ValueError):
        fm.D_il(p2, 1, 0)


def test_phi_monomial():
    assert fm.phi_monomial(1, 3) == (1, 2, 3)
    assert fm.phi_monomial(2, 3) == (2, 3, 1)
    assert fm.phi_monomial(3, 3) == (3, 2, 1)


def test_a_row_readings():
    p = fixed_profile(3)
    l = T([1, 0, 1], [0, 0], [0])
    assert fm.B_total(p, l) == Fraction(2087726690929984, 11344725)
    assert fm.B_total(p, l, "cumulative") != fm.B_total(p, l)
    with pytest.raises(ValueError):
        fm.A_row(p, (0, 0, 0), 1, (1, 0, 1), reading="other")
    with pytest.raises(ValueError):
        fm.A_row(p, (0, 0, 0), 1, (1, 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_factor_labels_multiply_to_b(n):
    p = fixed_profile(n)
    for l in fm.arrays_up_to(n, 4):
        assert math.prod(v for _, v in fm.B_total_factors(p, l)) == fm.B_total(p, l)


def test_factor_labels():
    labels = [lab for lab, _ in fm.B_total_factors(fixed_profile(1), T([2]))]
    assert labels == ["[2]_q!", "[lambda_11]_q", "[lambda_11 - 1]_q"]


def test_two_root_pairing_needs_order(p3):
    with pytest.raises(ValueError):
        fm.two_root_pairing(p3, 2, 2)


def test_degenerate_weight_witness():
    p = Params(2, Fraction(2), (Fraction(3), Fraction(1, 4)))
    witnesses = fm.genericity_witnesses(p, 3)
    assert T([1, 1], [0]) in witnesses and T([2, 0], [1]) in witnesses
    assert not fm.genericity_check(p, 3)
    assert fm.genericity_check(p, 2)
    with pytest.raises(fm.DegenerateWeight) as info:
        fm.require_generic(p, 3)
    assert info.value.witness in witnesses


def test_generic_draw_is_generic():
    p = fm.random_generic_params(3, random.Random(5), 4)
    assert fm.genericity_check(p, 4)


def test_singular_criterion(p2):
    assert not fm.singular_criterion(p2, 1, 1)
    arranged = p2.with_z((p2.z[0], p2.q ** 2))  # q^{lambda_2} = q^{m-1} for m = 3
    assert fm.singular_criterion(arranged, 2, 3)
    assert fm.singular_lowering_coefficient(arranged, 2, 3) == 0
    negative = p2.with_z((p2.z[0], -p2.q ** 2))
    assert fm.singular_criterion(negative, 2, 3)
    with pytest.raises(IndexError):
        fm.singular_criterion(p2, 3, 1)
    with pytest.raises(ValueError):
        fm.singular_criterion(p2, 1, 0)


def test_formula_discrepancy_report(p2):
    fm.check_formula("same", Fraction(1, 2), Fraction(1, 2), p2)
    with pytest.raises(fm.FormulaDiscrepancy) as info:
        fm.check_formula("demo", 1, 2, p2, point=(1,))
    d = info.value.as_dict()
    assert d["formula"] == "1/1" and d["engine"] == "2/1" and d["params"]["z"] == ["3/1", "5/1"]
    assert "q=2" in str(info.value)


def test_root_power_pairing_rejects_negative(p2):
    with pytest.raises(ValueError):
        fm.root_power_pairing(p2, zero_content(2), -1)
