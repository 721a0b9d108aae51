"""Dynamical root vectors acting on Verma vectors.

``f^_ik`` and ``e^_ik`` are never formed as algebra elements. They are operators defined
by recursion on ``k - i``, with every Cartan coefficient evaluated on a concrete weight:
coefficients written to the right of a negative monomial see the weight of the input,
coefficients written to the left of a positive monomial see the weight of the output.

The flipped family is the image of the same recursion under the diagram automorphism
``i -> n + 1 - i``; ``fhat_flip(i, k)`` is the vector attached to the root
``alpha_i + ... + alpha_k`` and is built by peeling ``f_k`` off first.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .freealg import TriangularArray, enumerate_pbw, expand_root_vector
from .qscalars import Content, Params, add_content, mu_power, q_bracket_from_power, root_content
from .verma import VermaModule, VermaVector, module

F_KINDS = ("fhat", "fhat_flip", "fbar", "simple_f", "root_f")
E_KINDS = ("ehat", "ehat_flip", "simple_e", "root_e")


@dataclass(frozen=True)
class DynAtom:
    kind: str
    i: int
    k: int

    def __post_init__(self):
        if self.kind not in F_KINDS + E_KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if not 1 <= self.i <= self.k:
            raise ValueError(f"atom indices must satisfy 1 <= i <= k, got ({self.i}, {self.k})")
        if self.kind in ("simple_f", "simple_e") and self.i != self.k:
            raise ValueError("simple generators carry a single index")

    @property
    def lowers(self) -> bool:
        """True for atoms that lower the weight (negative part)."""
        return self.kind in F_KINDS

    def content_shift(self, n: int) -> Content:
        shift = root_content(n, self.i, self.k)
        return shift if self.lowers else tuple(-x for x in shift)

    def __str__(self) -> str:
        names = {
            "fhat": "f^",
            "ehat": "e^",
            "fhat_flip": "f'",
            "ehat_flip": "e'",
            "fbar": "fbar",
            "simple_f": "f",
            "simple_e": "e",
            "root_f": "f",
            "root_e": "e",
        }
        if self.kind in ("simple_f", "simple_e"):
            return f"{names[self.kind]}{self.i}"
        return f"{names[self.kind]}{self.i}{self.k}"


DynScript = tuple[DynAtom, ...]


def fhat(i: int, k: int) -> DynAtom:
    return DynAtom("fhat", i, k)


def ehat(i: int, k: int) -> DynAtom:
    return DynAtom("ehat", i, k)


def fhat_flip(i: int, k: int) -> DynAtom:
    return DynAtom("fhat_flip", i, k)


def ehat_flip(i: int, k: int) -> DynAtom:
    return DynAtom("ehat_flip", i, k)


def fbar(n: int) -> DynAtom:
    return DynAtom("fbar", 1, n)


def simple_f(i: int) -> DynAtom:
    return DynAtom("simple_f", i, i)


def simple_e(i: int) -> DynAtom:
    return DynAtom("simple_e", i, i)


def root_f(i: int, k: int) -> DynAtom:
    return DynAtom("root_f", i, k)


def root_e(i: int, k: int) -> DynAtom:
    return DynAtom("root_e", i, k)


class DynamicalOperators:
    """Atom actions for one specialization, memoized per (atom, input content)."""

    def __init__(self, p: Params):
        self.p = p
        self.n = p.n
        self.mod: VermaModule = module(p)
        self._cols: dict[tuple[DynAtom, Content], list[VermaVector]] = {}
        self._lock = threading.Lock()

    def apply(self, atom: DynAtom, v: VermaVector) -> VermaVector:
        if atom.k > self.n:
            raise ValueError(f"atom {atom} exceeds rank {self.n}")
        target = add_content(v.content, atom.content_shift(self.n))
        if any(x < 0 for x in target) or any(x < 0 for x in v.content):
            return VermaVector.zero(target)
        key = (atom, v.content)
        cols = self._cols.get(key)
        if cols is None:
            cols = [self._raw(atom, VermaVector.basis_vector(l)) for l in enumerate_pbw(self.n, v.content)]
            with self._lock:
                cols = self._cols.setdefault(key, cols)
        out = VermaVector.zero(target)
        for c, col in zip(v.data, cols):
            if c:
                out = out + col.scale(c)
        return out

    def _raw(self, atom: DynAtom, v: VermaVector) -> VermaVector:
        kind, i, k = atom.kind, atom.i, atom.k
        mod, p = self.mod, self.p
        if kind == "simple_f":
            return mod.act_f(i, v)
        if kind == "simple_e":
            return mod.act_e(i, v)
        if kind == "root_f":
            return mod.apply_free(expand_root_vector(p, i, k), v)
        if kind == "root_e":
            from .verma import root_vector_e

            return mod.apply_e_free(root_vector_e(p, i, k), v)
        if kind == "fhat":
            return self._fhat(i, k, v)
        if kind == "ehat":
            return self._ehat(i, k, v)
        if kind == "fhat_flip":
            return self._fhat_flip(i, k, v)
        if kind == "ehat_flip":
            return self._ehat_flip(i, k, v)
        if kind == "fbar":
            return self._fbar(v)
        raise AssertionError(kind)

    def _combine(self, Q: Fraction, first: VermaVector, second: VermaVector) -> VermaVector:
        # q^{-1} [x]_q (first - q second) + q^x first
        q = self.p.q
        B = q_bracket_from_power(self.p, Q)
        return (first - second.scale(q)).scale(B / q) + first.scale(Q)

    def _fhat(self, i: int, k: int, v: VermaVector) -> VermaVector:
        if i == k:
            return self.mod.act_f(i, v)
        inner = fhat(i + 1, k)
        Q = mu_power(self.p, v.content, i + 1, k)
        a = self.mod.act_f(i, self.apply(inner, v))
        b = self.apply(inner, self.mod.act_f(i, v))
        return self._combine(Q, a, b)

    def _ehat(self, i: int, k: int, v: VermaVector) -> VermaVector:
        if i == k:
            return self.mod.act_e(i, v)
        inner = ehat(i + 1, k)
        out_content = add_content(v.content, root_content(self.n, i, k), -1)
        Q = mu_power(self.p, out_content, i + 1, k)
        w1 = self.apply(inner, self.mod.act_e(i, v))
        w2 = self.mod.act_e(i, self.apply(inner, v))
        return self._combine(Q, w1, w2)

    def _fhat_flip(self, i: int, k: int, v: VermaVector) -> VermaVector:
        if i == k:
            return self.mod.act_f(i, v)
        inner = fhat_flip(i, k - 1)
        Q = mu_power(self.p, v.content, i, k - 1)
        a = self.mod.act_f(k, self.apply(inner, v))
        b = self.apply(inner, self.mod.act_f(k, v))
        return self._combine(Q, a, b)

    def _ehat_flip(self, i: int, k: int, v: VermaVector) -> VermaVector:
        if i == k:
            return self.mod.act_e(i, v)
        inner = ehat_flip(i, k - 1)
        out_content = add_content(v.content, root_content(self.n, i, k), -1)
        Q = mu_power(self.p, out_content, i, k - 1)
        w1 = self.apply(inner, self.mod.act_e(k, v))
        w2 = self.mod.act_e(k, self.apply(inner, v))
        return self._combine(Q, w1, w2)

    def _fbar(self, v: VermaVector) -> VermaVector:
        n, q = self.n, self.p.q
        if n < 2:
            raise ValueError("fbar needs rank n >= 2")
        Q = mu_power(self.p, v.content, 2, n)
        B2 = q_bracket_from_power(self.p, q * q * Q)
        B1 = q_bracket_from_power(self.p, q * Q)
        inner = fhat(2, n)
        a = self.mod.act_f(1, self.apply(inner, v))
        b = self.apply(inner, self.mod.act_f(1, v))
        return a.scale(B2) - b.scale(B1)

    def apply_script(self, script: Sequence[DynAtom], v: VermaVector) -> VermaVector:
        for atom in reversed(tuple(script)):
            v = self.apply(atom, v)
        return v


@lru_cache(maxsize=128)
def operators(p: Params) -> DynamicalOperators:
    return DynamicalOperators(p)


def apply_fhat(p: Params, i: int, k: int, v: VermaVector) -> VermaVector:
    return operators(p).apply(fhat(i, k), v)


def apply_ehat(p: Params, i: int, k: int, v: VermaVector) -> VermaVector:
    return operators(p).apply(ehat(i, k), v)


def apply_fhat_flip(p: Params, i: int, k: int, v: VermaVector) -> VermaVector:
    return operators(p).apply(fhat_flip(i, k), v)


def apply_ehat_flip(p: Params, i: int, k: int, v: VermaVector) -> VermaVector:
    return operators(p).apply(ehat_flip(i, k), v)


def apply_fbar(p: Params, v: VermaVector) -> VermaVector:
    return operators(p).apply(fbar(p.n), v)


def apply_dynscript(p: Params, script: Sequence[DynAtom], v: VermaVector) -> VermaVector:
    return operators(p).apply_script(script, v)


def apply_fhat_commutator_form(p: Params, i: int, k: int, v: VermaVector) -> VermaVector:
    """``f_i f^_{i+1k} [h_{i+1k}+1]_q - f^_{i+1k} f_i [h_{i+1k}]_q`` on ``v``."""
    ops = operators(p)
    if i == k:
        return ops.mod.act_f(i, v)
    Q = mu_power(p, v.content, i + 1, k)
    inner = fhat(i + 1, k)
    a = ops.mod.act_f(i, ops.apply(inner, v))
    b = ops.apply(inner, ops.mod.act_f(i, v))
    return a.scale(q_bracket_from_power(p, Q * p.q)) - b.scale(q_bracket_from_power(p, Q))


def apply_ehat_commutator_form(p: Params, i: int, k: int, v: VermaVector) -> VermaVector:
    """``[h_{i+1k}+1]_q e^_{i+1k} e_i - [h_{i+1k}]_q e_i e^_{i+1k}`` on ``v``."""
    ops = operators(p)
    if i == k:
        return ops.mod.act_e(i, v)
    out_content = add_content(v.content, root_content(p.n, i, k), -1)
    Q = mu_power(p, out_content, i + 1, k)
    inner = ehat(i + 1, k)
    w1 = ops.apply(inner, ops.mod.act_e(i, v))
    w2 = ops.mod.act_e(i, ops.apply(inner, v))
    return w1.scale(q_bracket_from_power(p, Q * p.q)) - w2.scale(q_bracket_from_power(p, Q))


# -- monomials --------------------------------------------------------------------------


def _repeat(atom: DynAtom, times: int) -> list[DynAtom]:
    return [atom] * times


def fhat_monomial(l: TriangularArray) -> DynScript:
    """``f^(l) = f^(l_n) ... f^(l_1)`` with ``f^(l_k) = f^_kn^{l_kn} ... f^_kk^{l_kk}``."""
    n = l.n
    out: list[DynAtom] = []
    for k in range(n, 0, -1):
        for j in range(n, k - 1, -1):
            out += _repeat(fhat(k, j), l.get(k, j))
    return tuple(out)


def f_monomial(l: TriangularArray) -> DynScript:
    """The standard PBW monomial ``f(l)`` as root-vector atoms."""
    return tuple(root_f(a.i, a.k) for a in fhat_monomial(l))


def row_atoms_f(l: TriangularArray, k: int, dynamical: bool = True) -> DynScript:
    """``f^(l_k)`` (or ``f(l_k)``) for a single row."""
    make = fhat if dynamical else root_f
    out: list[DynAtom] = []
    for j in range(l.n, k - 1, -1):
        out += _repeat(make(k, j), l.get(k, j))
    return tuple(out)


def echeck_monomial(l: TriangularArray) -> DynScript:
    """``e-check(l) = e-check(l_1) ... e-check(l_n)`` with rows ``e^_kn^{l_kn} ... e^_kk^{l_kk}``."""
    n = l.n
    out: list[DynAtom] = []
    for k in range(1, n + 1):
        for j in range(n, k - 1, -1):
            out += _repeat(ehat(k, j), l.get(k, j))
    return tuple(out)


def ehat_monomial(l: TriangularArray) -> DynScript:
    """Normally ordered ``e^(l) = e^(l_1) ... e^(l_n)`` with rows ``e^_kk^{l_kk} ... e^_kn^{l_kn}``."""
    n = l.n
    out: list[DynAtom] = []
    for k in range(1, n + 1):
        for j in range(k, n + 1):
            out += _repeat(ehat(k, j), l.get(k, j))
    return tuple(out)


def ehat_sigma_monomial(l: TriangularArray, sigma: Sequence[Sequence[int]]) -> DynScript:
    """Normal monomial with the factors of row ``k`` permuted by ``sigma[k-1]``.

    ``sigma[k-1]`` is a permutation of ``range(|l_k|)`` and the permuted row is
    ``[row[s] for s in sigma[k-1]]``.
    """
    n = l.n
    if len(sigma) != n:
        raise ValueError(f"need {n} row permutations, got {len(sigma)}")
    out: list[DynAtom] = []
    for k in range(1, n + 1):
        row: list[DynAtom] = []
        for j in range(k, n + 1):
            row += _repeat(ehat(k, j), l.get(k, j))
        perm = tuple(sigma[k - 1])
        if sorted(perm) != list(range(len(row))):
            raise ValueError(f"row {k}: {perm} is not a permutation of {len(row)} factors")
        out += [row[s] for s in perm]
    return tuple(out)


def row_permutations(l: TriangularArray, k: int) -> list[tuple[int, ...]]:
    """Permutations of row ``k`` that give distinct factor orders."""
    labels = []
    for j in range(k, l.n + 1):
        labels += [j] * l.get(k, j)
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for perm in itertools.permutations(range(len(labels))):
        key = tuple(labels[s] for s in perm)
        seen.setdefault(key, perm)
    return list(seen.values())


def flip_atom(atom: DynAtom, n: int) -> DynAtom:
    """Image under the diagram automorphism ``i -> n + 1 - i``."""
    i, k = n + 1 - atom.k, n + 1 - atom.i
    kind = {
        "fhat": "fhat_flip",
        "fhat_flip": "fhat",
        "ehat": "ehat_flip",
        "ehat_flip": "ehat",
        "simple_f": "simple_f",
        "simple_e": "simple_e",
    }.get(atom.kind)
    if kind is None:
        raise ValueError(f"no flip for atom kind {atom.kind}")
    return DynAtom(kind, i, k)


def flip_script(script: Sequence[DynAtom], n: int) -> DynScript:
    return tuple(flip_atom(a, n) for a in script)


def flip_content(m: Sequence[int]) -> Content:
    return tuple(reversed(tuple(m)))


def flipped_fhat_monomial(l: TriangularArray) -> DynScript:
    """Flipped counterpart of ``f^(l)``: same shape and order, mirrored roots."""
    return flip_script(fhat_monomial(l), l.n)


def flipped_echeck_monomial(l: TriangularArray) -> DynScript:
    return flip_script(echeck_monomial(l), l.n)


def script_content(script: Sequence[DynAtom], n: int) -> Content:
    out = (0,) * n
    for a in script:
        out = add_content(out, a.content_shift(n))
    return out


_OMEGA_KIND = {
    "fhat": "ehat",
    "ehat": "fhat",
    "fhat_flip": "ehat_flip",
    "ehat_flip": "fhat_flip",
    "simple_f": "simple_e",
    "simple_e": "simple_f",
    "root_f": "root_e",
    "root_e": "root_f",
}


def omega_script(script: Sequence[DynAtom]) -> DynScript:
    """Chevalley anti-involution: reverse the atoms and swap raising with lowering.

    The recursions for ``e^_ik`` and ``f^_ik`` are exchanged by it, so ``omega(e^_ik) = f^_ik``.
    """
    out = []
    for a in reversed(tuple(script)):
        if a.kind == "fbar":
            raise ValueError("fbar has no raising counterpart here")
        out.append(DynAtom(_OMEGA_KIND[a.kind], a.i, a.k))
    return tuple(out)
