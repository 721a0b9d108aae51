"""Closed-form scalars: weight sequences, the A, B, C, D products and friends.

Every function takes a content ``m`` for the weight it is evaluated at, so the per-row
factors of a diagonal coefficient can be evaluated at shifted weights. Shifts such as
``[mu_sr - i + c]_q`` become ``Q * q**c`` before the bracket is taken. Empty products
are 1.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .freealg import TriangularArray, enumerate_pbw
from .qscalars import (
    Content,
    Params,
    add_content,
    bracket_is_zero,
    cartan_pairing,
    mu_power,
    q_bracket_from_power,
    q_factorial,
    q_int,
    random_params,
    root_content,
    zero_content,
)

A_ROW_READINGS = ("column", "cumulative")


class FormulaDiscrepancy(AssertionError):
    """A closed formula disagrees with the brute-force engine."""

    def __init__(self, name: str, formula_value, engine_value, p: Params, point=None):
        self.name = name
        self.formula_value = Fraction(formula_value)
        self.engine_value = Fraction(engine_value)
        self.params = p
        self.point = point
        super().__init__(
            f"{name}: formula {self.formula_value} != engine {self.engine_value} "
            f"at q={p.q}, z={tuple(str(x) for x in p.z)}, point={point}"
        )

    def as_dict(self) -> dict:
        from .qscalars import format_rational

        return {
            "name": self.name,
            "formula": format_rational(self.formula_value),
            "engine": format_rational(self.engine_value),
            "params": self.params.describe(),
            "point": None if self.point is None else str(self.point),
        }


class DegenerateWeight(ValueError):
    """Some diagonal coefficient ``B_l`` vanishes at the requested specialization."""

    def __init__(self, p: Params, witness: TriangularArray):
        self.params = p
        self.witness = witness
        super().__init__(f"B vanishes at l={witness.entries} for q={p.q}, z={tuple(str(x) for x in p.z)}")


def check_formula(name: str, formula_value, engine_value, p: Params, point=None) -> None:
    """Raise :class:`FormulaDiscrepancy` unless the two values agree exactly."""
    if Fraction(formula_value) != Fraction(engine_value):
        raise FormulaDiscrepancy(name, formula_value, engine_value, p, point)


def bracket(p: Params, Q: Fraction) -> Fraction:
    return q_bracket_from_power(p, Q)


def shifted_bracket(p: Params, m: Sequence[int], s: int, r: int, shift: int) -> Fraction:
    """``[mu_sr + shift]_q`` at the weight with content ``m``."""
    return bracket(p, mu_power(p, m, s, r) * p.q**shift)


def weight_sequence(l: TriangularArray) -> list[Content]:
    """Contents of ``lambda_{l,0}, ..., lambda_{l,n}``; row ``i`` removes ``sum_k l_ik alpha_ik``."""
    n = l.n
    out = [zero_content(n)]
    for i in range(1, n + 1):
        cur = out[-1]
        for k in range(i, n + 1):
            c = l.get(i, k)
            if c:
                cur = add_content(cur, tuple(c * x for x in root_content(n, i, k)))
        out.append(cur)
    return out


def C_km(p: Params, m: Sequence[int], k: int, mm: int) -> Fraction:
    """``prod_{i=k}^{mm} [mu_{i mm}]_q``."""
    if k > mm:
        raise ValueError(f"C_km needs k <= mm, got ({k}, {mm})")
    out = Fraction(1)
    for i in range(k, mm + 1):
        out *= bracket(p, mu_power(p, m, i, mm))
    return out


def _row_entries(p: Params, k: int, row: Sequence[int]) -> dict[int, int]:
    if len(row) != p.n - k + 1:
        raise ValueError(f"row {k} must have {p.n - k + 1} entries, got {len(row)}")
    if any(x < 0 for x in row):
        raise ValueError("row entries must be nonnegative")
    return {r: row[r - k] for r in range(k, p.n + 1)}


def A_row(p: Params, m: Sequence[int], k: int, row: Sequence[int], reading: str = "column") -> Fraction:
    """``prod_{k+1<=s<=r<=n} prod_{i<l_r} [mu_sr - i + l_{s-1} + 1]_q``.

    ``reading="column"`` takes ``l_{s-1}`` to be the row entry in column ``s-1``;
    ``"cumulative"`` takes the sum of the entries in columns ``k..s-1`` and is kept only
    as the rejected alternative.
    """
    if reading not in A_ROW_READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    ent = _row_entries(p, k, row)
    out = Fraction(1)
    for s in range(k + 1, p.n + 1):
        if reading == "column":
            prev = ent[s - 1]
        else:
            prev = sum(ent[c] for c in range(k, s))
        for r in range(s, p.n + 1):
            for i in range(ent[r]):
                out *= shifted_bracket(p, m, s, r, prev + 1 - i)
    return out


def B_row(p: Params, m: Sequence[int], k: int, row: Sequence[int], reading: str = "column") -> Fraction:
    """Diagonal coefficient of one row: factorials, the ``[mu_sr - i]_q`` block and ``A_row``."""
    ent = _row_entries(p, k, row)
    out = Fraction(1)
    for r in range(k, p.n + 1):
        out *= q_factorial(p, ent[r])
        for s in range(k, r + 1):
            for i in range(ent[r]):
                out *= shifted_bracket(p, m, s, r, -i)
    return out * A_row(p, m, k, row, reading)


def B_total(p: Params, l: TriangularArray, reading: str = "column") -> Fraction:
    """``B_l(lambda) = B_{l_1}(lambda_{l,0}) ... B_{l_n}(lambda_{l,n-1})``."""
    if l.n != p.n:
        raise ValueError("rank mismatch")
    seq = weight_sequence(l)
    out = Fraction(1)
    for k in range(1, p.n + 1):
        out *= B_row(p, seq[k - 1], k, l.row(k), reading)
        if not out:
            return out
    return out


def _bracket_label(n: int, m: Sequence[int], s: int, r: int, shift: int) -> str:
    """``[lambda_sr + c]_q`` for ``[mu_sr + shift]_q`` at content ``m``."""
    c = shift - sum(m[j - 1] * cartan_pairing(j, t) for t in range(s, r + 1) for j in range(1, n + 1))
    if c == 0:
        return f"[lambda_{s}{r}]_q"
    return f"[lambda_{s}{r} {'+' if c > 0 else '-'} {abs(c)}]_q"


def B_total_factors(p: Params, l: TriangularArray, reading: str = "column") -> list[tuple[str, Fraction]]:
    """``B_total`` as labelled factors, in terms of ``lambda``; factorials ``[0]_q!`` and ``[1]_q!`` are dropped."""
    if reading not in A_ROW_READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    n = p.n
    seq = weight_sequence(l)
    out: list[tuple[str, Fraction]] = []
    for k in range(1, n + 1):
        m = seq[k - 1]
        ent = _row_entries(p, k, l.row(k))
        for r in range(k, n + 1):
            if ent[r] > 1:
                out.append((f"[{ent[r]}]_q!", q_factorial(p, ent[r])))
            for s in range(k, r + 1):
                for i in range(ent[r]):
                    out.append((_bracket_label(n, m, s, r, -i), shifted_bracket(p, m, s, r, -i)))
        for s in range(k + 1, n + 1):
            prev = ent[s - 1] if reading == "column" else sum(ent[c] for c in range(k, s))
            for r in range(s, n + 1):
                for i in range(ent[r]):
                    sh = prev + 1 - i
                    out.append((_bracket_label(n, m, s, r, sh), shifted_bracket(p, m, s, r, sh)))
    return out


def sl3_formula(p: Params, l: TriangularArray) -> Fraction:
    """The rank-two product with ``m = l_11``, ``l = l_12``, ``k = l_22``."""
    if p.n != 2:
        raise ValueError("sl3_formula needs n = 2")
    m, ll, k = l.get(1, 1), l.get(1, 2), l.get(2, 2)
    z0 = zero_content(2)
    out = q_factorial(p, ll) * q_factorial(p, m) * q_factorial(p, k)
    for i in range(k):
        out *= shifted_bracket(p, z0, 2, 2, m - ll - i)
    for i in range(ll):
        out *= shifted_bracket(p, z0, 2, 2, m + 1 - i)
        out *= shifted_bracket(p, z0, 2, 2, -i)
        out *= shifted_bracket(p, z0, 1, 2, -i)
    for i in range(m):
        out *= shifted_bracket(p, z0, 1, 1, -i)
    return out


def root_power_pairing(p: Params, m: Sequence[int], l: int) -> Fraction:
    """``[l]_q! prod_{i<l} [mu_1n - i]_q ... [mu_nn - i]_q``."""
    if l < 0:
        raise ValueError("l must be >= 0")
    out = q_factorial(p, l)
    for i in range(l):
        for k in range(1, p.n + 1):
            out *= shifted_bracket(p, m, k, p.n, -i)
    return out


def two_root_pairing(p: Params, k: int, mm: int, m: Sequence[int] | None = None) -> Fraction:
    """Pairing of ``e^_{1mm} e^_{1k}`` with ``f^_{1mm} f^_{1k}``, ``k < mm``.

    The first product is read with q-brackets, ``prod_{j=2}^k [lambda_jk + 1]_q``.
    """
    if not 1 <= k < mm <= p.n:
        raise ValueError(f"need 1 <= k < mm <= n, got ({k}, {mm})")
    m = zero_content(p.n) if m is None else tuple(m)
    out = Fraction(1)
    for j in range(2, k + 1):
        out *= shifted_bracket(p, m, j, k, 1)
        out *= shifted_bracket(p, m, j, mm, 1)
    out *= shifted_bracket(p, m, k + 1, mm, 2)
    for j in range(k + 2, mm + 1):
        out *= shifted_bracket(p, m, j, mm, 1)
    return out * C_km(p, m, 1, k) * C_km(p, m, 1, mm)


def shift_by_root(m: Sequence[int], times: int) -> Content:
    """Content of ``mu - times * alpha_1n``."""
    return tuple(x + times for x in m)


def D_il(p: Params, i: int, l: int, m: Sequence[int] | None = None) -> Fraction:
    """Coefficient of ``phi_i f_1n^l v = D_{i,l} f_1n^{l-1} v`` modulo the ``n_2n`` ideal.

    For ``n = 1`` only the last branch applies (``phi_1 = e_1``).
    """
    n = p.n
    if not 1 <= i <= n:
        raise IndexError(f"index {i} out of range 1..{n}")
    if l < 1:
        raise ValueError("l must be >= 1")
    m = zero_content(n) if m is None else tuple(m)
    q = p.q
    z = [mu_power(p, m, s, s) for s in range(1, n + 1)]  # q^{mu_s}
    lead = q ** (1 - l) * q_int(p, l)
    if i == n:
        pre = Fraction(1)
        for s in range(1, n):
            pre /= z[s - 1]
        return lead * q ** (l - 1) * pre * bracket(p, z[n - 1] * q ** (1 - l))
    pre = Fraction(1)
    for s in range(1, i):
        pre /= z[s - 1]
    for s in range(i + 1, n + 1):
        pre *= z[s - 1]
    return lead * (-q) ** (n - i) * pre * bracket(p, z[i - 1])


def d_reduction_first(p: Params, l: int) -> tuple[Fraction, Fraction]:
    """Both sides of the ``D_1`` reduction formula, ``l' = l - 1``."""
    n, q = p.n, p.q
    lp = l - 1
    z0 = zero_content(n)
    lhs = D_il(p, 1, l) - q ** (-lp) * q_int(p, l) * (-1) ** (n - 1) * mu_power(p, z0, 1, n) * q ** (-lp) * q_int(p, lp)
    rhs = q ** (-lp) * q_int(p, l) * D_il(p, 1, 1, shift_by_root(z0, lp))
    return lhs, rhs


def d_reduction_rest(p: Params, i: int, l: int) -> tuple[Fraction, Fraction]:
    """Both sides of ``D_{i,l}(lambda) = q^{-l'} [l]_q D_{i,1}(lambda - l' alpha_1n)``."""
    lp = l - 1
    z0 = zero_content(p.n)
    return D_il(p, i, l), p.q ** (-lp) * q_int(p, l) * D_il(p, i, 1, shift_by_root(z0, lp))


def d_reductions_hold(p: Params, l_max: int = 4) -> bool:
    """Exact check of both reductions for ``1 <= l <= l_max`` (needs ``n >= 2``)."""
    if p.n < 2:
        raise ValueError("the reductions are stated for n >= 2")
    for l in range(1, l_max + 1):
        a, b = d_reduction_first(p, l)
        if a != b:
            return False
        for i in range(2, p.n + 1):
            a, b = d_reduction_rest(p, i, l)
            if a != b:
                return False
    return True


def a1_coeff(p: Params, m: Sequence[int]) -> Fraction:
    """``a_1(mu) = (-1)^{n-1} prod_{i=2}^n [mu_in]_q``."""
    out = Fraction((-1) ** (p.n - 1))
    for i in range(2, p.n + 1):
        out *= bracket(p, mu_power(p, m, i, p.n))
    return out


def phi_monomial(i: int, n: int) -> tuple[int, ...]:
    """The e-letters of ``phi_i``, leftmost first."""
    if not 1 <= i <= n:
        raise IndexError(f"index {i} out of range 1..{n}")
    return tuple(range(i, n + 1)) + tuple(range(i - 1, 0, -1))


def singular_lowering_coefficient(p: Params, k: int, mpow: int) -> Fraction:
    """``[m]_q [lambda_kn - m + 1]_q``."""
    return q_int(p, mpow) * bracket(p, mu_power(p, zero_content(p.n), k, p.n) * p.q ** (1 - mpow))


def arrays_up_to(n: int, depth: int) -> Iterable[TriangularArray]:
    from .freealg import contents_up_to

    for m in contents_up_to(n, depth):
        yield from enumerate_pbw(n, m)


def genericity_witnesses(p: Params, depth: int) -> list[TriangularArray]:
    """All ``l`` of degree ``<= depth`` with ``B_l = 0``."""
    return [l for l in arrays_up_to(p.n, depth) if B_total(p, l) == 0]


def genericity_check(p: Params, depth: int) -> bool:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return all(B_total(p, l) != 0 for l in arrays_up_to(p.n, depth))


def require_generic(p: Params, depth: int) -> None:
    bad = genericity_witnesses(p, depth)
    if bad:
        raise DegenerateWeight(p, bad[0])


def singular_criterion(p: Params, k: int, mpow: int) -> bool:
    """``[lambda_kn - m + 1]_q = 0``, i.e. ``Q**2 == 1``."""
    if not 1 <= k <= p.n:
        raise IndexError(f"index {k} out of range 1..{p.n}")
    if mpow < 1:
        raise ValueError("m must be >= 1")
    return bracket_is_zero(p.q ** (1 - mpow) * mu_power(p, zero_content(p.n), k, p.n))


def random_generic_params(n: int, rng: random.Random, depth: int, max_tries: int = 200) -> Params:
    """Random specialization at which every ``B_l`` of degree ``<= depth`` is nonzero."""
    for _ in range(max_tries):
        p = random_params(n, rng)
        if genericity_check(p, depth):
            return p
    raise RuntimeError("no generic specialization found; widen the prime range")
