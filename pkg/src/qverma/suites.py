"""Verification suites: operator identities and closed formulas checked against the engine.

Each suite takes a specialization and a depth and returns a :class:`SuiteResult` holding
the number of exact comparisons made and the first counterexample, if any. ``depth``
bounds the total content of the input vectors (or of the arrays ``l``) a suite ranges over.
Formula mismatches are recorded as :class:`~qverma.formulas.FormulaDiscrepancy` objects.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from . import dynamical as dyn
from . import formulas as fm
from . import linalg
from .freealg import (
    FreeElement,
    TriangularArray,
    contents_up_to,
    enumerate_pbw,
    enumerate_words,
    expand_coords,
    expand_root_vector,
    reduce_modulo_serre,
    serre_rank,
    weight_space,
)
from .qscalars import (
    Content,
    Params,
    add_content,
    cartan_pairing,
    format_rational,
    mu_power,
    q_bracket_from_power,
    q_int,
    q_power_of_weight,
    root_content,
    zero_content,
)
from .verma import VermaVector, basis_vectors, highest_weight_vector, module, standard_gram


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    checks: int = 0
    counterexample: str | None = None
    discrepancies: list[fm.FormulaDiscrepancy] = field(default_factory=list)
    notes: dict[str, str] = field(default_factory=dict)
    skipped: bool = False

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "skipped": self.skipped,
            "checks": self.checks,
            "counterexample": self.counterexample,
            "discrepancies": [d.as_dict() for d in self.discrepancies],
            "notes": dict(self.notes),
        }


class _Recorder:
    def __init__(self, name: str, p: Params):
        self.res = SuiteResult(name)
        self.p = p

    def check(self, ok: bool, describe: Callable[[], str] | str) -> bool:
        self.res.checks += 1
        if not ok:
            self.res.passed = False
            if self.res.counterexample is None:
                self.res.counterexample = describe() if callable(describe) else describe
        return ok

    def formula(self, name: str, formula_value, engine_value, point) -> bool:
        self.res.checks += 1
        try:
            fm.check_formula(name, formula_value, engine_value, self.p, point)
        except fm.FormulaDiscrepancy as exc:
            self.res.passed = False
            self.res.discrepancies.append(exc)
            if self.res.counterexample is None:
                self.res.counterexample = str(exc)
            return False
        return True

    def skip(self, why: str) -> SuiteResult:
        self.res.skipped = True
        self.res.notes["skipped"] = why
        return self.res


def _vectors(n: int, depth: int) -> Iterator[VermaVector]:
    for m in contents_up_to(n, depth):
        yield from basis_vectors(n, m)


def _valid(m: Content) -> bool:
    return all(x >= 0 for x in m)


def _same(a: VermaVector, b: VermaVector) -> bool:
    """Equality that treats vectors of a negative content as zero."""
    if not _valid(a.content):
        return not _valid(b.content) or b.is_zero()
    if not _valid(b.content):
        return a.is_zero()
    return a == b


def _zero(a: VermaVector) -> bool:
    return not _valid(a.content) or a.is_zero()


def _fmt(v: VermaVector) -> str:
    return f"content {v.content}: {str(v)}"


def _v(p: Params) -> VermaVector:
    return highest_weight_vector(p.n)


def highest_pairing(p: Params, script, v: VermaVector) -> Fraction:
    """``<v* X v>`` for a dynamical script ``X`` of content zero (0 otherwise)."""
    w = dyn.apply_dynscript(p, script, v)
    if any(w.content) or not w.data:
        return Fraction(0)
    return w.data[0]


# -- relations of the algebra -----------------------------------------------------------


def defining_relations(p: Params, depth: int) -> SuiteResult:
    """Chevalley, Cartan and Serre relations as operators on every basis vector."""
    rec = _Recorder("defining-relations", p)
    mod = module(p)
    n = p.n
    two = q_int(p, 2)
    for v in _vectors(n, depth):
        m = v.content
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                lhs = mod.act_e(i, mod.act_f(j, v)) - mod.act_f(j, mod.act_e(i, v))
                if i == j:
                    rhs = v.scale(q_bracket_from_power(p, q_power_of_weight(p, m, i)))
                    rec.check(lhs == rhs, lambda: f"[e{i}, f{i}] on {_fmt(v)}")
                else:
                    rec.check(_zero(lhs), lambda: f"[e{i}, f{j}] on {_fmt(v)}")
                c = p.q ** cartan_pairing(i, j)
                ev = mod.act_e(j, v)
                if _valid(ev.content):
                    conj = mod.act_t(i, 1, mod.act_e(j, mod.act_t(i, -1, v)))
                    rec.check(conj == ev.scale(c), lambda: f"t{i} e{j} t{i}^-1 on {_fmt(v)}")
                fv = mod.act_f(j, v)
                conj = mod.act_t(i, 1, mod.act_f(j, mod.act_t(i, -1, v)))
                rec.check(conj == fv.scale(1 / c), lambda: f"t{i} f{j} t{i}^-1 on {_fmt(v)}")
                if abs(i - j) == 1:
                    for act, name in ((mod.apply_escript, "e"), (mod.apply_word, "f")):
                        a = act((i, i, j), v)
                        b = act((i, j, i), v)
                        c3 = act((j, i, i), v)
                        if _valid(a.content):
                            rec.check((a - b.scale(two) + c3).is_zero(), lambda: f"{name}-Serre ({i},{j}) on {_fmt(v)}")
                elif i < j:
                    for act, name in ((mod.apply_escript, "e"), (mod.apply_word, "f")):
                        a, b = act((i, j), v), act((j, i), v)
                        if _valid(a.content):
                            rec.check(a == b, lambda: f"{name}{i}, {name}{j} commute on {_fmt(v)}")
    return rec.res


def dimension(p: Params, depth: int) -> SuiteResult:
    """PBW count against the word-space ideal, and straightening against the same ideal."""
    rec = _Recorder("dimension", p)
    for m in contents_up_to(p.n, depth):
        words = enumerate_words(p.n, m)
        rank = serre_rank(p, m)
        rec.check(len(enumerate_pbw(p.n, m)) == len(words) - rank, lambda: f"content {m}: dimension mismatch")
        ws = weight_space(p, m)
        for w in words:
            x = FreeElement.word(p.n, w)
            back = expand_coords(p, m, ws.straighten(x))
            rec.check(reduce_modulo_serre(p, x - back).is_zero(), lambda: f"word {w} straightens wrongly")
    return rec.res


def root_vector_commutators(p: Params, depth: int) -> SuiteResult:
    """Commutators of ``f_ij`` with ``f_k``, ``e_k`` and the end generators.

    ``[e_j, f_ij]`` is checked with the Cartan factor ``q^{h_j}``; the variant with
    ``q^{h_i}`` is evaluated too and its failure count is reported in the notes.
    """
    rec = _Recorder("root-vector-commutators", p)
    mod = module(p)
    q = p.q
    n = p.n
    hi_fail = hi_total = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            fij = expand_root_vector(p, i, j)
            fprev = expand_root_vector(p, i, j - 1)
            fnext = expand_root_vector(p, i + 1, j)
            F = lambda v: mod.apply_free(fij, v)  # noqa: E731
            for v in _vectors(n, depth):
                m = v.content
                for k in range(i + 1, j):
                    rec.check(mod.act_f(k, F(v)) == F(mod.act_f(k, v)), lambda: f"[f{k}, f{i}{j}] on {_fmt(v)}")
                    rec.check(
                        _same(mod.act_e(k, F(v)), F(mod.act_e(k, v))) if _valid(add_content(m, root_content(n, k, k), -1))
                        else mod.act_e(k, F(v)).is_zero(),
                        lambda: f"[e{k}, f{i}{j}] on {_fmt(v)}",
                    )
                a = F(mod.act_f(i, v)) - mod.act_f(i, F(v)).scale(q)
                rec.check(a.is_zero(), lambda: f"[f{i}{j}, f{i}]_q on {_fmt(v)}")
                a = mod.act_f(j, F(v)) - F(mod.act_f(j, v)).scale(q)
                rec.check(a.is_zero(), lambda: f"[f{j}, f{i}{j}]_q on {_fmt(v)}")
                ev = mod.act_e(i, v)
                lhs = mod.act_e(i, F(v)) - (F(ev) if _valid(ev.content) else VermaVector.zero(add_content(m, root_content(n, i + 1, j))))
                rhs = mod.apply_free(fnext, v).scale(1 / q_power_of_weight(p, m, i))
                rec.check(lhs == rhs, lambda: f"[e{i}, f{i}{j}] on {_fmt(v)}")
                ev = mod.act_e(j, v)
                lhs = mod.act_e(j, F(v)) - (F(ev) if _valid(ev.content) else VermaVector.zero(add_content(m, root_content(n, i, j - 1))))
                base = mod.apply_free(fprev, v).scale(-q)
                rec.check(lhs == base.scale(q_power_of_weight(p, m, j)), lambda: f"[e{j}, f{i}{j}] (h_j) on {_fmt(v)}")
                hi_total += 1
                hi_fail += lhs != base.scale(q_power_of_weight(p, m, i))
    rec.res.notes["h_i-variant"] = f"fails on {hi_fail} of {hi_total} vectors"
    return rec.res


def permuted_monomials_ideal(p: Params, depth: int) -> SuiteResult:
    """``f_s(1) ... f_s(m) w`` lies in ``n_{2m}^- M`` for every permutation ``s != id``."""
    rec = _Recorder("permuted-monomials-ideal", p)
    mod = module(p)
    n = p.n
    if n < 2:
        return rec.skip("needs n >= 2")
    for mm in range(2, n + 1):
        for sigma in itertools.permutations(range(1, mm + 1)):
            for w in _vectors(n, max(0, depth - mm)):
                inside, _ = mod.ideal_quotient_project(2, mod.apply_word(sigma, w), mm)
                if sigma == tuple(range(1, mm + 1)):
                    if not any(w.content):
                        rec.check(not inside, lambda: f"f_1...f_{mm} v unexpectedly in the ideal")
                    continue
                rec.check(inside, lambda: f"word {sigma} on {_fmt(w)} not in the ideal")
    return rec.res


def _e_words(letters: range, max_len: int) -> Iterator[tuple[int, ...]]:
    for length in range(1, max_len + 1):
        yield from itertools.product(letters, repeat=length)


def positive_commutators_ideal(p: Params, depth: int) -> SuiteResult:
    """``[u, f_jm] w`` lies in ``n_{j+1 m}^- M`` for ``u`` a word in ``e_i..e_k``, ``i <= j <= k < m``."""
    rec = _Recorder("positive-commutators-ideal", p)
    mod = module(p)
    n = p.n
    if n < 2:
        return rec.skip("needs n >= 2")
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for k in range(j, n):
                for mm in range(k + 1, n + 1):
                    fjm = expand_root_vector(p, j, mm)
                    for u in _e_words(range(i, k + 1), 2):
                        for w in _vectors(n, max(0, depth - (mm - j + 1))):
                            a = mod.apply_escript(u, mod.apply_free(fjm, w))
                            b = mod.apply_escript(u, w)
                            if not _valid(a.content):
                                continue
                            if _valid(b.content):
                                a = a - mod.apply_free(fjm, b)
                            inside, _ = mod.ideal_quotient_project(j + 1, a, mm)
                            rec.check(inside, lambda: f"[e{u}, f{j}{mm}] on {_fmt(w)}")
    return rec.res


# -- dynamical root vectors ---------------------------------------------------------------


def dynamical_singularity(p: Params, depth: int) -> SuiteResult:
    """If ``e_k v = 0`` for ``i < k <= j`` then ``e_k f^_ij v = 0``; if also ``e_i v = 0`` then
    ``e_i f^_ij v = [mu_ij]_q f^_{i+1 j} v``.

    The second identity holds modulo ``U e_i`` only, so it needs ``e_i v = 0`` as well; the
    notes count the ``e_k``-singular vectors outside ``ker e_i`` on which it fails.
    """
    rec = _Recorder("dynamical-singularity", p)
    mod = module(p)
    n = p.n
    outside = failing = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for m in contents_up_to(n, depth):
                c = q_bracket_from_power(p, mu_power(p, m, i, j))
                for v in mod.kernel(range(i + 1, j + 1), m):
                    w = dyn.apply_fhat(p, i, j, v)
                    for k in range(i + 1, j + 1):
                        rec.check(mod.act_e(k, w).is_zero(), lambda: f"e{k} f^{i}{j} on singular {_fmt(v)}")
                    if _zero(mod.act_e(i, v)):
                        continue
                    outside += 1
                    failing += mod.act_e(i, w) != dyn.apply_fhat(p, i + 1, j, v).scale(c)
                for v in mod.kernel(range(i, j + 1), m):
                    w = dyn.apply_fhat(p, i, j, v)
                    rec.check(
                        mod.act_e(i, w) == dyn.apply_fhat(p, i + 1, j, v).scale(c),
                        lambda: f"e{i} f^{i}{j} on singular {_fmt(v)}",
                    )
    rec.res.notes["outside-ker-e_i"] = f"bracket identity fails on {failing} of {outside} vectors"
    return rec.res


def commutator_forms(p: Params, depth: int) -> SuiteResult:
    """The bracketed and the ``[h+1] x y - [h] y x`` forms of ``f^_ik`` and ``e^_ik`` agree."""
    rec = _Recorder("commutator-forms", p)
    n = p.n
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            for v in _vectors(n, depth):
                rec.check(
                    dyn.apply_fhat(p, i, k, v) == dyn.apply_fhat_commutator_form(p, i, k, v),
                    lambda: f"f^{i}{k} forms differ on {_fmt(v)}",
                )
                a, b = dyn.apply_ehat(p, i, k, v), dyn.apply_ehat_commutator_form(p, i, k, v)
                rec.check(_same(a, b), lambda: f"e^{i}{k} forms differ on {_fmt(v)}")
    return rec.res


def nonvanishing(p: Params, depth: int = 0) -> SuiteResult:
    """``f^_ik v_lambda != 0`` for every positive root (and for the flipped vectors)."""
    rec = _Recorder("nonvanishing", p)
    v = _v(p)
    for i in range(1, p.n + 1):
        for k in range(i, p.n + 1):
            rec.check(not dyn.apply_fhat(p, i, k, v).is_zero(), f"f^{i}{k} v = 0")
            rec.check(not dyn.apply_fhat_flip(p, i, k, v).is_zero(), f"flipped f^{i}{k} v = 0")
    return rec.res


def dynamical_orthogonality(p: Params, depth: int) -> SuiteResult:
    """``<v* e^(k) f^(l) v> = 0`` for ``k != l`` of equal content (normal ordering)."""
    rec = _Recorder("dynamical-orthogonality", p)
    v = _v(p)
    for m in contents_up_to(p.n, depth):
        arrays = enumerate_pbw(p.n, m)
        fs = {l: dyn.apply_dynscript(p, dyn.fhat_monomial(l), v) for l in arrays}
        for k in arrays:
            sc = dyn.ehat_monomial(k)
            for l in arrays:
                if k != l:
                    rec.check(highest_pairing(p, sc, fs[l]) == 0, lambda: f"k={k.entries}, l={l.entries}")
    return rec.res


def shapovalov_diagonal(p: Params, depth: int) -> SuiteResult:
    """``<v* e-check(k) f^(l) v> = delta_kl B_l``."""
    rec = _Recorder("shapovalov-diagonal", p)
    v = _v(p)
    for m in contents_up_to(p.n, depth):
        arrays = enumerate_pbw(p.n, m)
        fs = {l: dyn.apply_dynscript(p, dyn.fhat_monomial(l), v) for l in arrays}
        for k in arrays:
            sc = dyn.echeck_monomial(k)
            for l in arrays:
                val = highest_pairing(p, sc, fs[l])
                if k == l:
                    rec.formula("B_total", fm.B_total(p, l), val, l.entries)
                else:
                    rec.check(val == 0, lambda: f"off-diagonal k={k.entries}, l={l.entries}: {val}")
    return rec.res


def contravariant_diagonal(p: Params, depth: int) -> SuiteResult:
    """Contravariant Gram of ``f^(l) v`` is ``diag(B_l)``; ``theta(f^(l) v)`` equals ``v* e-check(l)``."""
    rec = _Recorder("contravariant-diagonal", p)
    mod = module(p)
    v = _v(p)
    for m in contents_up_to(p.n, depth):
        arrays = enumerate_pbw(p.n, m)
        vecs = [dyn.apply_dynscript(p, dyn.fhat_monomial(l), v) for l in arrays]
        gram = mod.gram_contravariant(m, vecs)
        for a, l in enumerate(arrays):
            for b in range(len(arrays)):
                if a == b:
                    rec.formula("B_total (contravariant)", fm.B_total(p, l), gram[a][a], l.entries)
                else:
                    rec.check(gram[a][b] == 0, lambda: f"content {m}: entry ({a},{b}) = {gram[a][b]}")
            sc = dyn.echeck_monomial(l)
            check = mod.functional_of(lambda x: dyn.apply_dynscript(p, sc, x), m)
            rec.check(mod.theta_functional(vecs[a]) == check, lambda: f"theta(f^(l) v) != v* e-check(l) at l={l.entries}")
        std = standard_gram(p, m)
        rec.check(std == linalg.transpose(std), lambda: f"standard Gram not symmetric at {m}")
    return rec.res


def row_commutativity(p: Params, depth: int) -> SuiteResult:
    """``[f^_ik, f^_im]`` and ``[e^_ik, e^_im]`` vanish on every basis vector."""
    rec = _Recorder("row-commutativity", p)
    n = p.n
    for i in range(1, n + 1):
        for k in range(i, n + 1):
            for mm in range(k + 1, n + 1):
                for v in _vectors(n, depth):
                    for make, name in ((dyn.fhat, "f^"), (dyn.ehat, "e^")):
                        a = dyn.apply_dynscript(p, (make(i, k), make(i, mm)), v)
                        b = dyn.apply_dynscript(p, (make(i, mm), make(i, k)), v)
                        rec.check(_same(a, b), lambda: f"[{name}{i}{k}, {name}{i}{mm}] on {_fmt(v)}")
    return rec.res


def _sigma_choices(l: TriangularArray, limit: int = 48) -> list[tuple[tuple[int, ...], ...]]:
    per_row = [dyn.row_permutations(l, k) for k in range(1, l.n + 1)]
    out = []
    for combo in itertools.product(*per_row):
        out.append(combo)
        if len(out) >= limit:
            break
    return out


def ordering_independence(p: Params, depth: int) -> SuiteResult:
    """``e^_sigma(l) = e^(l) = e-check(l)`` as operators."""
    rec = _Recorder("ordering-independence", p)
    n = p.n
    for l in fm.arrays_up_to(n, depth):
        normal = dyn.ehat_monomial(l)
        check = dyn.echeck_monomial(l)
        sigmas = _sigma_choices(l)
        lc = l.content()
        for v in _vectors(n, depth):
            if not _valid(add_content(v.content, lc, -1)):
                continue
            ref = dyn.apply_dynscript(p, normal, v)
            rec.check(dyn.apply_dynscript(p, check, v) == ref, lambda: f"e-check != e^ at l={l.entries} on {_fmt(v)}")
            for s in sigmas:
                got = dyn.apply_dynscript(p, dyn.ehat_sigma_monomial(l, s), v)
                rec.check(got == ref, lambda: f"sigma={s} at l={l.entries} on {_fmt(v)}")
    return rec.res


# -- closed formulas ----------------------------------------------------------------------


def _row_arrays(n: int, k: int, depth: int) -> Iterator[TriangularArray]:
    width = n - k + 1
    for total in range(depth + 1):
        for row in _compositions(width, total):
            entries = {(k, k + c): x for c, x in enumerate(row)}
            yield TriangularArray.from_dict(n, entries)


def _compositions(width: int, total: int) -> Iterator[tuple[int, ...]]:
    if width == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(width - 1, total - first):
            yield (first,) + rest


def row_factor_formula(p: Params, depth: int) -> SuiteResult:
    """Single-row diagonal coefficient ``B_row`` against the engine pairing at ``v_lambda``."""
    rec = _Recorder("row-factor-formula", p)
    v = _v(p)
    z0 = zero_content(p.n)
    for k in range(1, p.n + 1):
        for l in _row_arrays(p.n, k, depth):
            engine = highest_pairing(p, dyn.echeck_monomial(l) + dyn.fhat_monomial(l), v)
            rec.formula("B_row", fm.B_row(p, z0, k, l.row(k)), engine, l.entries)
    return rec.res


def leading_term_ratio(p: Params, depth: int) -> SuiteResult:
    """Replacing ``f^(l_1)`` by ``f(l_1)`` divides the first-row pairing by ``A_row``."""
    rec = _Recorder("leading-term-ratio", p)
    v = _v(p)
    z0 = zero_content(p.n)
    for l in _row_arrays(p.n, 1, depth):
        sc = dyn.echeck_monomial(l)
        dynamic = highest_pairing(p, sc + dyn.fhat_monomial(l), v)
        standard = highest_pairing(p, sc + dyn.f_monomial(l), v)
        rec.formula("A_row", fm.A_row(p, z0, 1, l.row(1)) * standard, dynamic, l.entries)
    return rec.res


def row_factorization(p: Params, depth: int) -> SuiteResult:
    """``<v* e-check(l_1) f(l_1) v> = prod_k <v* e^_1k^{l_k} f_1k^{l_k} v>``."""
    rec = _Recorder("row-factorization", p)
    v = _v(p)
    for l in _row_arrays(p.n, 1, depth):
        whole = highest_pairing(p, dyn.echeck_monomial(l) + dyn.f_monomial(l), v)
        prod = Fraction(1)
        for k in range(1, p.n + 1):
            e = l.get(1, k)
            prod *= highest_pairing(p, (dyn.ehat(1, k),) * e + (dyn.root_f(1, k),) * e, v)
        rec.check(whole == prod, lambda: f"l={l.entries}: {whole} != {prod}")
    return rec.res


def single_root_pairing(p: Params, depth: int = 1) -> SuiteResult:
    """``<v* e^_km f_km v> = C_km``."""
    rec = _Recorder("single-root-pairing", p)
    v = _v(p)
    z0 = zero_content(p.n)
    for k in range(1, p.n + 1):
        for mm in range(k, p.n + 1):
            engine = highest_pairing(p, (dyn.ehat(k, mm), dyn.root_f(k, mm)), v)
            rec.formula("C_km", fm.C_km(p, z0, k, mm), engine, (k, mm))
    return rec.res


def root_power_pairing(p: Params, depth: int) -> SuiteResult:
    """``<v* e^_1n^l f_1n^l v>`` for ``l <= depth``; ``l = 1`` also against ``C_1n``."""
    rec = _Recorder("root-power-pairing", p)
    v = _v(p)
    n = p.n
    z0 = zero_content(n)
    for l in range(depth + 1):
        engine = highest_pairing(p, (dyn.ehat(1, n),) * l + (dyn.root_f(1, n),) * l, v)
        rec.formula("root power pairing", fm.root_power_pairing(p, z0, l), engine, l)
        if l == 1:
            rec.formula("C_1n", fm.C_km(p, z0, 1, n), engine, l)
    return rec.res


def phi_action(p: Params, depth: int) -> SuiteResult:
    """``phi_i f_1n^l v = D_{i,l} f_1n^{l-1} v`` modulo ``n_2n^- M`` (exactly when ``n = 1``)."""
    rec = _Recorder("phi-action", p)
    mod = module(p)
    n = p.n
    v = _v(p)
    f1n = dyn.root_f(1, n)
    for l in range(1, depth + 1):
        top = dyn.apply_dynscript(p, (f1n,) * l, v)
        low = dyn.apply_dynscript(p, (f1n,) * (l - 1), v)
        for i in range(1, n + 1):
            diff = mod.apply_escript(fm.phi_monomial(i, n), top) - low.scale(fm.D_il(p, i, l))
            if n == 1:
                rec.check(diff.is_zero(), lambda: f"i={i}, l={l}: residue {diff}")
            else:
                inside, residue = mod.ideal_quotient_project(2, diff, n)
                rec.check(inside, lambda: f"i={i}, l={l}: residue {residue}")
    return rec.res


def d_reductions(p: Params, depth: int) -> SuiteResult:
    """Both reduction identities of the ``D`` coefficients for ``1 <= l <= depth``."""
    rec = _Recorder("d-reductions", p)
    if p.n < 2:
        return rec.skip("needs n >= 2")
    for l in range(1, depth + 1):
        a, b = fm.d_reduction_first(p, l)
        rec.formula("D_1 reduction", b, a, l)
        for i in range(2, p.n + 1):
            a, b = fm.d_reduction_rest(p, i, l)
            rec.formula(f"D_{i} reduction", b, a, l)
    return rec.res


def two_root_pairing(p: Params, depth: int = 2) -> SuiteResult:
    """``<v* e^_1m e^_1k f^_1m f^_1k v>`` for ``k < m``."""
    rec = _Recorder("two-root-pairing", p)
    v = _v(p)
    for k in range(1, p.n + 1):
        for mm in range(k + 1, p.n + 1):
            engine = highest_pairing(p, (dyn.ehat(1, mm), dyn.ehat(1, k), dyn.fhat(1, mm), dyn.fhat(1, k)), v)
            rec.formula("two-root pairing", fm.two_root_pairing(p, k, mm), engine, (k, mm))
    return rec.res


def rank_two_formula(p: Params, depth: int) -> SuiteResult:
    """For ``n = 2`` the explicit product equals ``B_total`` and the engine pairing."""
    rec = _Recorder("rank-two-formula", p)
    if p.n != 2:
        return rec.skip("needs n = 2")
    v = _v(p)
    for l in fm.arrays_up_to(2, depth):
        closed = fm.sl3_formula(p, l)
        rec.formula("rank-two product vs B_total", closed, fm.B_total(p, l), l.entries)
        engine = highest_pairing(p, dyn.echeck_monomial(l) + dyn.fhat_monomial(l), v)
        rec.formula("rank-two product", closed, engine, l.entries)
    return rec.res


def dual_basis_matrices(p: Params, m: Content) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """``H = sum_l f^(l) v (x) v* e-check(l) / B_l`` and the standard Gram ``G`` on content ``m``.

    ``v* e-check(l)`` is represented by ``omega(e-check(l)) v`` through the contravariant form.
    """
    v = _v(p)
    arrays = enumerate_pbw(p.n, m)
    Bs = [fm.B_total(p, l) for l in arrays]
    for l, b in zip(arrays, Bs):
        if b == 0:
            raise fm.DegenerateWeight(p, l)
    F = linalg.transpose([list(dyn.apply_dynscript(p, dyn.fhat_monomial(l), v).data) for l in arrays])
    Y = [[x / b for x in dyn.apply_dynscript(p, dyn.omega_script(dyn.echeck_monomial(l)), v).data] for l, b in zip(arrays, Bs)]
    return linalg.matmul(F, Y), standard_gram(p, m)


def dual_basis(p: Params, depth: int) -> SuiteResult:
    """The dynamical sum inverts the standard Gram matrix on every weight space, both sides."""
    rec = _Recorder("dual-basis", p)
    for m in contents_up_to(p.n, depth):
        try:
            H, G = dual_basis_matrices(p, m)
        except fm.DegenerateWeight as exc:
            rec.check(False, str(exc))
            continue
        rec.check(linalg.is_identity(linalg.matmul(H, G)), lambda: f"H G != 1 at content {m}")
        rec.check(linalg.is_identity(linalg.matmul(G, H)), lambda: f"G H != 1 at content {m}")
    return rec.res


# -- singular vectors ---------------------------------------------------------------------


def dynamical_serre(p: Params, depth: int) -> SuiteResult:
    """``f_1 f^_2n^2 - [2]_q f^_2n f_1 f^_2n + f^_2n^2 f_1`` annihilates every basis vector."""
    rec = _Recorder("dynamical-serre", p)
    n = p.n
    if n < 2:
        return rec.skip("needs n >= 2")
    f1, g = dyn.simple_f(1), dyn.fhat(2, n)
    two = q_int(p, 2)
    for v in _vectors(n, depth):
        a = dyn.apply_dynscript(p, (f1, g, g), v)
        b = dyn.apply_dynscript(p, (g, f1, g), v)
        c = dyn.apply_dynscript(p, (g, g, f1), v)
        rec.check((a - b.scale(two) + c).is_zero(), lambda: f"on {_fmt(v)}")
    return rec.res


def barred_intertwining(p: Params, depth: int) -> SuiteResult:
    """``fbar_1n f^_2n = f^_2n f^_1n`` on every basis vector."""
    rec = _Recorder("barred-intertwining", p)
    n = p.n
    if n < 2:
        return rec.skip("needs n >= 2")
    for v in _vectors(n, depth):
        a = dyn.apply_dynscript(p, (dyn.fbar(n), dyn.fhat(2, n)), v)
        b = dyn.apply_dynscript(p, (dyn.fhat(2, n), dyn.fhat(1, n)), v)
        rec.check(a == b, lambda: f"on {_fmt(v)}")
    return rec.res


def e1_power_action(p: Params, depth: int, max_power: int = 3) -> SuiteResult:
    """``e_1 f^_1n^m = [m]_q f^_2n f^_1n^{m-1} [h_1n - m + 1]_q + fbar_1n^m e_1`` on basis vectors."""
    rec = _Recorder("e1-power-action", p)
    n = p.n
    if n < 2:
        return rec.skip("needs n >= 2")
    mod = module(p)
    for mp in range(1, max_power + 1):
        for v in _vectors(n, depth):
            lhs = mod.act_e(1, dyn.apply_dynscript(p, (dyn.fhat(1, n),) * mp, v))
            c = q_int(p, mp) * q_bracket_from_power(p, mu_power(p, v.content, 1, n) * p.q ** (1 - mp))
            first = dyn.apply_dynscript(p, (dyn.fhat(2, n),) + (dyn.fhat(1, n),) * (mp - 1), v).scale(c)
            ev = mod.act_e(1, v)
            second = dyn.apply_dynscript(p, (dyn.fbar(n),) * mp, ev) if _valid(ev.content) else VermaVector.zero(first.content)
            rec.check(lhs == first + second, lambda: f"m={mp} on {_fmt(v)}")
    return rec.res


def singular_lowering(p: Params, depth: int = 3) -> SuiteResult:
    """``e_i f^_kn^m v = delta_ki [m]_q [lambda_kn - m + 1]_q f^_{k+1 n} f^_kn^{m-1} v``, ``m <= depth``."""
    rec = _Recorder("singular-lowering", p)
    mod = module(p)
    n = p.n
    v = _v(p)
    for k in range(1, n + 1):
        for mp in range(1, depth + 1):
            top = dyn.apply_dynscript(p, (dyn.fhat(k, n),) * mp, v)
            below = (dyn.fhat(k + 1, n),) if k < n else ()
            expect = dyn.apply_dynscript(p, below + (dyn.fhat(k, n),) * (mp - 1), v).scale(fm.singular_lowering_coefficient(p, k, mp))
            for i in range(1, n + 1):
                got = mod.act_e(i, top)
                if i == k:
                    rec.check(got == expect, lambda: f"e{i} f^{k}{n}^{mp} v")
                else:
                    rec.check(got.is_zero(), lambda: f"e{i} f^{k}{n}^{mp} v != 0")
    return rec.res


def arranged_params(p: Params, k: int, mp: int, sign: int = 1) -> Params:
    """Change ``z_k`` so that ``q^{lambda_kn - m + 1} = sign``."""
    n = p.n
    rest = Fraction(1)
    for s in range(k + 1, n + 1):
        rest *= p.z[s - 1]
    z = list(p.z)
    z[k - 1] = sign * p.q ** (mp - 1 - (n - k)) / rest
    return p.with_z(z)


def singular_criterion(p: Params, depth: int = 3) -> SuiteResult:
    """``f^_kn^m v`` is singular exactly when ``[lambda_kn - m + 1]_q = 0``, both branches of ``Q^2 = 1``."""
    rec = _Recorder("singular-criterion", p)
    n = p.n
    for k in range(1, n + 1):
        for mp in range(1, depth + 1):
            if not fm.singular_criterion(p, k, mp):
                top = dyn.apply_dynscript(p, (dyn.fhat(k, n),) * mp, _v(p))
                rec.check(not module(p).act_e(k, top).is_zero(), lambda: f"generic: e{k} kills f^{k}{n}^{mp} v")
            for sign in (1, -1):
                pa = arranged_params(p, k, mp, sign)
                rec.check(fm.singular_criterion(pa, k, mp), lambda: f"criterion false at arranged z={pa.z}")
                top = dyn.apply_dynscript(pa, (dyn.fhat(k, n),) * mp, _v(pa))
                rec.check(not top.is_zero(), lambda: f"f^{k}{n}^{mp} v = 0 at arranged z={pa.z}")
                for i in range(1, n + 1):
                    rec.check(
                        module(pa).act_e(i, top).is_zero(),
                        lambda: f"e{i} f^{k}{n}^{mp} v != 0 at z={tuple(map(str, pa.z))}",
                    )
                sub = nonvanishing(pa)
                rec.check(sub.passed, lambda: f"nonvanishing fails at z={pa.z}: {sub.counterexample}")
    return rec.res


# -- flipped system -----------------------------------------------------------------------


def flipped_params(p: Params) -> Params:
    return p.with_z(tuple(reversed(p.z)))


def system_matrix(p: Params, m: Content, flipped: bool = False) -> list[list[Fraction]]:
    """Columns: coordinates of the (flipped) dynamical system at content ``m``."""
    v = _v(p)
    if flipped:
        arrays = enumerate_pbw(p.n, dyn.flip_content(m))
        cols = [dyn.apply_dynscript(p, dyn.flipped_fhat_monomial(l), v).data for l in arrays]
    else:
        cols = [dyn.apply_dynscript(p, dyn.fhat_monomial(l), v).data for l in enumerate_pbw(p.n, m)]
    return linalg.transpose([list(c) for c in cols]) if cols else []


def flip_determinants(p: Params, m: Content) -> dict[str, Fraction]:
    return {
        "original": linalg.determinant(system_matrix(p, m)),
        "flipped": linalg.determinant(system_matrix(p, m, flipped=True)),
        "standard_gram": linalg.determinant(standard_gram(p, m)),
    }


def flip(p: Params, depth: int) -> SuiteResult:
    """Flipped pairing is diagonal with ``B`` at the mirrored weight; nonzero ``B`` forces a basis."""
    rec = _Recorder("flip", p)
    n = p.n
    v = _v(p)
    pt = flipped_params(p)
    for m in contents_up_to(n, depth):
        arrays = enumerate_pbw(n, dyn.flip_content(m))
        fs = {l: dyn.apply_dynscript(p, dyn.flipped_fhat_monomial(l), v) for l in arrays}
        for k in arrays:
            sc = dyn.flipped_echeck_monomial(k)
            for l in arrays:
                val = highest_pairing(p, sc, fs[l])
                if k == l:
                    rec.formula("B_total at mirrored weight", fm.B_total(pt, l), val, l.entries)
                else:
                    rec.check(val == 0, lambda: f"flipped off-diagonal k={k.entries}, l={l.entries}")
        dets = flip_determinants(p, m)
        if all(fm.B_total(p, l) for l in enumerate_pbw(n, m)):
            rec.check(dets["original"] != 0, lambda: f"original system singular at generic content {m}")
        if all(fm.B_total(pt, l) for l in arrays):
            rec.check(dets["flipped"] != 0, lambda: f"flipped system singular at generic content {m}")
    return rec.res


def degeneration_pattern(p: Params, m: Content) -> dict:
    """Rank-two degeneration data at content ``m``: vanishing ``B``'s and the three determinants."""
    if p.n != 2:
        raise ValueError("the degeneration pattern is a rank-two statement")
    dets = flip_determinants(p, m)
    return {
        "content": m,
        "vanishing_B": [l for l in enumerate_pbw(2, m) if fm.B_total(p, l) == 0],
        **dets,
    }


SUITES: dict[str, Callable[[Params, int], SuiteResult]] = {
    "defining-relations": defining_relations,
    "dimension": dimension,
    "root-vector-commutators": root_vector_commutators,
    "permuted-monomials-ideal": permuted_monomials_ideal,
    "positive-commutators-ideal": positive_commutators_ideal,
    "dynamical-singularity": dynamical_singularity,
    "commutator-forms": commutator_forms,
    "nonvanishing": nonvanishing,
    "dynamical-orthogonality": dynamical_orthogonality,
    "shapovalov-diagonal": shapovalov_diagonal,
    "contravariant-diagonal": contravariant_diagonal,
    "row-commutativity": row_commutativity,
    "ordering-independence": ordering_independence,
    "row-factor-formula": row_factor_formula,
    "leading-term-ratio": leading_term_ratio,
    "row-factorization": row_factorization,
    "single-root-pairing": single_root_pairing,
    "root-power-pairing": root_power_pairing,
    "phi-action": phi_action,
    "d-reductions": d_reductions,
    "two-root-pairing": two_root_pairing,
    "rank-two-formula": rank_two_formula,
    "dual-basis": dual_basis,
    "dynamical-serre": dynamical_serre,
    "barred-intertwining": barred_intertwining,
    "e1-power-action": e1_power_action,
    "singular-lowering": singular_lowering,
    "singular-criterion": singular_criterion,
    "flip": flip,
}

# Suites whose cost grows fastest with depth run at a reduced depth by default.
DEPTH_CAPS: dict[str, int] = {
    "e1-power-action": 3,
    "singular-lowering": 3,
    "singular-criterion": 3,
    "row-factor-formula": 4,
}


def run_suite(name: str, p: Params, depth: int, capped: bool = True) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    d = min(depth, DEPTH_CAPS.get(name, depth)) if capped else depth
    res = SUITES[name](p, d)
    if not res.checks and not res.skipped:
        res.skipped = True
        res.notes["skipped"] = "no instances at this rank and depth"
    res.notes.setdefault("depth", str(d))
    return res


def run_suites(names: Iterable[str], p: Params, depth: int) -> list[SuiteResult]:
    return [run_suite(name, p, depth) for name in names]


def describe_point(p: Params) -> str:
    return f"n={p.n}, q={format_rational(p.q)}, z=({', '.join(format_rational(x) for x in p.z)})"
