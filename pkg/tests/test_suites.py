from fractions import Fraction

import pytest

from qverma import suites
from qverma.freealg import TriangularArray
from qverma.qscalars import Params, fixed_profile


@pytest.mark.parametrize("name", list(suites.SUITES))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_suite_passes_at_small_depth(name, n):
    res = suites.run_suite(name, fixed_profile(n), 2)
    assert res.passed, res.counterexample
    assert res.skipped or res.checks > 0
    assert res.as_dict()["name"] == name


def test_generic_points_pass(generic2):
    for name in ("shapovalov-diagonal", "dual-basis", "flip", "rank-two-formula"):
        res = suites.run_suite(name, generic2, 3)
        assert res.passed, (name, res.counterexample)


def test_unknown_suite():
    with pytest.raises(KeyError):
        suites.run_suite("nope", fixed_profile(2), 1)


def test_depth_caps():
    assert suites.run_suite("e1-power-action", fixed_profile(2), 9).notes["depth"] == "3"
    assert suites.run_suite("e1-power-action", fixed_profile(2), 1).notes["depth"] == "1"


def test_h_i_variant_of_root_commutator_fails():
    res = suites.root_vector_commutators(fixed_profile(2), 2)
    failed, total = [int(x) for x in res.notes["h_i-variant"].split() if x.isdigit()]
    assert failed == total > 0


def test_bracket_identity_needs_e_i_kernel():
    res = suites.dynamical_singularity(fixed_profile(2), 3)
    failed, total = [int(x) for x in res.notes["outside-ker-e_i"].split() if x.isdigit()]
    assert failed == total > 0


def test_formula_mismatch_is_reported(monkeypatch):
    monkeypatch.setattr(suites.fm, "B_total", lambda p, l, reading="column": Fraction(7))
    res = suites.shapovalov_diagonal(fixed_profile(2), 1)
    assert not res.passed
    assert res.discrepancies and res.discrepancies[0].formula_value == 7
    assert "formula 7" in res.counterexample


def test_dual_basis_refuses_degenerate_weight():
    p = Params(2, Fraction(2), (Fraction(3), Fraction(1, 4)))
    res = suites.dual_basis(p, 3)
    assert not res.passed and "B vanishes" in res.counterexample


def test_arranged_params_hit_the_criterion(p3):
    for k in (1, 2, 3):
        for sign in (1, -1):
            pa = suites.arranged_params(p3, k, 2, sign)
            assert suites.fm.singular_criterion(pa, k, 2)


def test_degeneration_pattern():
    p = Params(2, Fraction(2), (Fraction(3), Fraction(1, 4)))
    pat = suites.degeneration_pattern(p, (2, 1))
    assert TriangularArray.from_rows([[2, 0], [1]]) in pat["vanishing_B"]
    assert pat["original"] == 0
    assert pat["flipped"] != 0 and pat["standard_gram"] != 0
    with pytest.raises(ValueError):
        suites.degeneration_pattern(fixed_profile(3), (1, 1, 1))
