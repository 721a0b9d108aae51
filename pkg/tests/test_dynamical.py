from fractions import Fraction

import pytest

from qverma import dynamical as dyn
from qverma.freealg import TriangularArray, contents_up_to
from qverma.qscalars import fixed_profile
from qverma.suites import (
    barred_intertwining,
    commutator_forms,
    dynamical_serre,
    nonvanishing,
    ordering_independence,
    row_commutativity,
)
from qverma.verma import basis_vectors, highest_weight_vector, module


def T(*rows):
    return TriangularArray.from_rows(rows)


def test_fhat_on_highest_weight_frozen(p2):
    got = dyn.apply_fhat(p2, 1, 2, highest_weight_vector(2)).coords
    # [lambda_2 + 1]_q f_12 v + q z_2 f_2 f_1 v
    assert got == {T([0, 1], [0]): Fraction(33, 5), T([1, 0], [1]): Fraction(10)}


def test_diagonal_atoms_are_generators(p2):
    mod = module(p2)
    for v in basis_vectors(2, (1, 1)):
        assert dyn.apply_fhat(p2, 2, 2, v) == mod.act_f(2, v)
        assert dyn.apply_ehat(p2, 1, 1, v) == mod.act_e(1, v)


def test_raising_atom_at_highest_weight_is_zero(p3):
    v = highest_weight_vector(3)
    out = dyn.apply_ehat(p3, 1, 3, v)
    assert out.is_zero()


@pytest.mark.parametrize("suite", [commutator_forms, row_commutativity, ordering_independence])
@pytest.mark.parametrize("n,depth", [(2, 3), (3, 2)])
def test_operator_identities(suite, n, depth):
    res = suite(fixed_profile(n), depth)
    assert res.passed, res.counterexample


@pytest.mark.parametrize("suite", [dynamical_serre, barred_intertwining])
def test_barred_identities(suite, p3):
    res = suite(p3, 3)
    assert res.passed and res.checks > 0, res.counterexample


def test_nonvanishing(profile):
    assert nonvanishing(profile).passed


def test_fbar_needs_rank_two():
    with pytest.raises(ValueError):
        dyn.apply_fbar(fixed_profile(1), highest_weight_vector(1))


def test_atom_validation():
    with pytest.raises(ValueError):
        dyn.DynAtom("nope", 1, 1)
    with pytest.raises(ValueError):
        dyn.DynAtom("fhat", 2, 1)
    with pytest.raises(ValueError):
        dyn.DynAtom("simple_f", 1, 2)
    assert str(dyn.fhat(1, 3)) == "f^13"
    assert dyn.fhat(1, 2).content_shift(3) == (1, 1, 0)
    assert dyn.ehat(1, 2).content_shift(3) == (-1, -1, 0)


def test_monomial_orders():
    l = T([1, 0, 1], [1, 0], [2])
    assert dyn.fhat_monomial(l) == (dyn.fhat(3, 3),) * 2 + (dyn.fhat(2, 2), dyn.fhat(1, 3), dyn.fhat(1, 1))
    assert dyn.echeck_monomial(l) == (dyn.ehat(1, 3), dyn.ehat(1, 1), dyn.ehat(2, 2)) + (dyn.ehat(3, 3),) * 2
    assert dyn.ehat_monomial(l) == (dyn.ehat(1, 1), dyn.ehat(1, 3), dyn.ehat(2, 2)) + (dyn.ehat(3, 3),) * 2
    assert dyn.script_content(dyn.fhat_monomial(l), 3) == l.content()


def test_sigma_monomial():
    l = T([1, 1], [0])
    assert dyn.row_permutations(l, 1) == [(0, 1), (1, 0)]
    assert dyn.ehat_sigma_monomial(l, [(1, 0), ()]) == (dyn.ehat(1, 2), dyn.ehat(1, 1))
    with pytest.raises(ValueError):
        dyn.ehat_sigma_monomial(l, [(0, 0), ()])
    with pytest.raises(ValueError):
        dyn.ehat_sigma_monomial(l, [(0, 1)])


def test_flip_and_omega_on_scripts():
    assert dyn.flip_atom(dyn.fhat(1, 2), 3) == dyn.fhat_flip(2, 3)
    assert dyn.flip_script(dyn.flip_script((dyn.fhat(1, 2), dyn.simple_e(3)), 3), 3) == (dyn.fhat(1, 2), dyn.simple_e(3))
    assert dyn.flip_content((1, 2, 3)) == (3, 2, 1)
    assert dyn.omega_script((dyn.fhat(1, 2), dyn.simple_f(1))) == (dyn.simple_e(1), dyn.ehat(1, 2))
    with pytest.raises(ValueError):
        dyn.omega_script((dyn.fbar(2),))
    with pytest.raises(ValueError):
        dyn.flip_atom(dyn.fbar(2), 2)


def test_omega_exchanges_hatted_vectors(p2):
    # <omega(e^(l)) v, x> = <v* e^(l) x> for every x, since theta is contravariant
    mod = module(p2)
    v = highest_weight_vector(2)
    for m in contents_up_to(2, 3):
        for l in dyn.enumerate_pbw(2, m):
            sc = dyn.echeck_monomial(l)
            lhs = mod.theta_functional(dyn.apply_dynscript(p2, dyn.omega_script(sc), v))
            rhs = mod.functional_of(lambda x: dyn.apply_dynscript(p2, sc, x), m)
            assert lhs == rhs


def test_flipped_vectors_in_rank_one_agree():
    p = fixed_profile(1)
    v = highest_weight_vector(1)
    assert dyn.apply_fhat_flip(p, 1, 1, v) == dyn.apply_fhat(p, 1, 1, v)
