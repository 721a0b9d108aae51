"""The Verma module ``M_lambda`` in straightened PBW coordinates.

The weight space of content ``m`` has basis ``f(l) v_lambda`` for the triangular arrays
``l`` of that content. Negative generators act through the block structure of the weight
spaces; ``e_i`` is pushed through ``f_a`` using ``[e_i, f_a] = delta_ia [h_i]_q`` with the
Cartan element evaluated on the weight of the vector to its right. Positive elements are
never straightened: they only exist as scripts of letters applied to vectors.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from . import linalg
from .freealg import (
    FreeElement,
    TriangularArray,
    Word,
    enumerate_pbw,
    expand_pbw_monomial,
    expand_root_vector,
    weight_space,
    word_content,
)
from .qscalars import (
    Content,
    Params,
    add_content,
    check_index,
    q_bracket_from_power,
    q_power_of_weight,
    root_content,
    unit_content,
    zero_content,
)

EScript = tuple[int, ...]


@dataclass(frozen=True)
class VermaVector:
    """Dense coordinates over ``enumerate_pbw(n, content)``.

    A content with a negative entry is a zero-dimensional weight space; vectors there are
    the zero vector with empty data.
    """

    content: Content
    data: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.content)

    @classmethod
    def zero(cls, m: Sequence[int]) -> "VermaVector":
        m = tuple(m)
        return cls(m, (Fraction(0),) * len(enumerate_pbw(len(m), m)))

    @classmethod
    def from_coords(cls, m: Sequence[int], coords: dict) -> "VermaVector":
        m = tuple(m)
        basis = enumerate_pbw(len(m), m)
        unknown = set(coords) - set(basis)
        if unknown:
            raise ValueError(f"arrays {sorted(map(str, unknown))} do not have content {m}")
        return cls(m, tuple(Fraction(coords.get(l, 0)) for l in basis))

    @classmethod
    def basis_vector(cls, l: TriangularArray) -> "VermaVector":
        return cls.from_coords(l.content(), {l: 1})

    @property
    def coords(self) -> dict[TriangularArray, Fraction]:
        return {l: c for l, c in zip(enumerate_pbw(self.n, self.content), self.data) if c}

    def is_zero(self) -> bool:
        return not any(self.data)

    def _check(self, other: "VermaVector") -> None:
        if self.content != other.content:
            raise ValueError(f"contents differ: {self.content} vs {other.content}")

    def __add__(self, other: "VermaVector") -> "VermaVector":
        self._check(other)
        return VermaVector(self.content, tuple(a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "VermaVector") -> "VermaVector":
        self._check(other)
        return VermaVector(self.content, tuple(a - b for a, b in zip(self.data, other.data)))

    def __neg__(self) -> "VermaVector":
        return VermaVector(self.content, tuple(-a for a in self.data))

    def scale(self, c) -> "VermaVector":
        c = Fraction(c)
        return VermaVector(self.content, tuple(c * a for a in self.data))

    def __rmul__(self, c) -> "VermaVector":
        return self.scale(c)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join(f"({c})*f{l}" for l, c in self.coords.items()) + " v"


def highest_weight_vector(n: int) -> VermaVector:
    return VermaVector(zero_content(n), (Fraction(1),))


def basis_vectors(n: int, m: Sequence[int]) -> list[VermaVector]:
    return [VermaVector.basis_vector(l) for l in enumerate_pbw(n, tuple(m))]


def _valid(m: Content) -> bool:
    return all(x >= 0 for x in m)


class VermaModule:
    """Per-``Params`` operator tables, filled lazily and write-once."""

    def __init__(self, p: Params):
        self.p = p
        self.n = p.n
        self._lock = threading.Lock()
        self._f: dict[tuple[int, Content], list[list[Fraction]]] = {}
        self._e: dict[tuple[int, Content], list[list[Fraction]]] = {}
        self._escript_functionals: dict[tuple[int, ...], list[Fraction]] = {}
        self._theta: dict[Content, list[list[Fraction]]] = {}

    def _store(self, table: dict, key, value):
        with self._lock:
            return table.setdefault(key, value)

    # -- generator columns ------------------------------------------------------------
    def f_columns(self, i: int, m: Content) -> list[list[Fraction]]:
        """Images of the basis of content ``m`` under ``f_i``, as coordinate columns."""
        key = (i, m)
        got = self._f.get(key)
        if got is not None:
            return got
        target = add_content(m, unit_content(self.n, i))
        cols = weight_space(self.p, target).left_columns(i)
        return self._store(self._f, key, cols)

    def e_columns(self, i: int, m: Content) -> list[list[Fraction]]:
        """Images under ``e_i``. Each basis vector is written ``sum_a f_a Y_a v`` and
        ``e_i f_a = f_a e_i + delta_ia [h_i]_q`` with ``h_i`` read on the weight of ``Y_a v``."""
        key = (i, m)
        got = self._e.get(key)
        if got is not None:
            return got
        target = add_content(m, unit_content(self.n, i), -1)
        if not _valid(target):
            cols = [[] for _ in enumerate_pbw(self.n, m)]
        else:
            ws = weight_space(self.p, m)
            h = q_bracket_from_power(self.p, q_power_of_weight(self.p, target, i))
            cols = []
            for idx in range(len(ws.pbw)):
                out = VermaVector.zero(target)
                for a, part in ws.block_parts(idx).items():
                    y = VermaVector(add_content(m, unit_content(self.n, a), -1), tuple(part))
                    out = out + self.act_f(a, self.act_e(i, y))
                    if a == i:
                        out = out + y.scale(h)
                cols.append(list(out.data))
        return self._store(self._e, key, cols)

    def e_columns_by_words(self, i: int, m: Content) -> list[list[Fraction]]:
        """Same matrix as :meth:`e_columns`, by pushing ``e_i`` through word expansions."""
        target = add_content(m, unit_content(self.n, i), -1)
        if not _valid(target):
            return [[] for _ in enumerate_pbw(self.n, m)]
        ws = weight_space(self.p, target)
        return [ws.straighten(self.e_on_words(i, expand_pbw_monomial(self.p, l))) for l in enumerate_pbw(self.n, m)]

    def f_columns_by_words(self, i: int, m: Content) -> list[list[Fraction]]:
        """Same matrix as :meth:`f_columns`, by straightening ``f_i f(l)`` word by word."""
        ws = weight_space(self.p, add_content(m, unit_content(self.n, i)))
        fi = FreeElement.word(self.n, (i,))
        return [ws.straighten(fi * expand_pbw_monomial(self.p, l)) for l in enumerate_pbw(self.n, m)]

    def e_on_words(self, i: int, x: FreeElement) -> FreeElement:
        """``e_i x v_lambda`` as a word combination (before straightening)."""
        target = add_content(x.content, unit_content(self.n, i), -1)
        out: dict[Word, Fraction] = {}
        for w, c in x.terms.items():
            for s, a in enumerate(w):
                if a != i:
                    continue
                suffix = word_content(w[s + 1 :], self.n)
                coeff = c * q_bracket_from_power(self.p, q_power_of_weight(self.p, suffix, i))
                if coeff:
                    reduced = w[:s] + w[s + 1 :]
                    out[reduced] = out.get(reduced, 0) + coeff
        return FreeElement(self.n, target, out)

    # -- actions ------------------------------------------------------------------------
    @staticmethod
    def _apply_columns(cols: list[list[Fraction]], v: VermaVector, target: Content) -> VermaVector:
        size = len(enumerate_pbw(len(target), target)) if _valid(target) else 0
        out = [Fraction(0)] * size
        for c, col in zip(v.data, cols):
            if c:
                for k, x in enumerate(col):
                    if x:
                        out[k] += c * x
        return VermaVector(target, tuple(out))

    def act_f(self, i: int, v: VermaVector) -> VermaVector:
        check_index(self.n, i)
        target = add_content(v.content, unit_content(self.n, i))
        if not _valid(v.content):
            return VermaVector.zero(target) if _valid(target) else VermaVector(target, ())
        return self._apply_columns(self.f_columns(i, v.content), v, target)

    def act_e(self, i: int, v: VermaVector) -> VermaVector:
        check_index(self.n, i)
        target = add_content(v.content, unit_content(self.n, i), -1)
        if not _valid(target) or not _valid(v.content):
            return VermaVector(target, ())
        return self._apply_columns(self.e_columns(i, v.content), v, target)

    def act_t(self, i: int, sign: int, v: VermaVector) -> VermaVector:
        check_index(self.n, i)
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return v.scale(q_power_of_weight(self.p, v.content, i) ** sign)

    def apply_word(self, word: Sequence[int], v: VermaVector) -> VermaVector:
        for a in reversed(word):
            v = self.act_f(a, v)
        return v

    def apply_free(self, x: FreeElement, v: VermaVector) -> VermaVector:
        """Act by a combination of f-words."""
        target = add_content(v.content, x.content)
        out = VermaVector.zero(target) if _valid(target) else VermaVector(target, ())
        for w, c in x.terms.items():
            out = out + self.apply_word(w, v).scale(c)
        return out

    def apply_escript(self, script: Sequence[int], v: VermaVector) -> VermaVector:
        for a in reversed(tuple(script)):
            v = self.act_e(a, v)
        return v

    def apply_e_free(self, x: FreeElement, v: VermaVector) -> VermaVector:
        """Act by a combination of e-words (letters read as positive generators)."""
        target = add_content(v.content, x.content, -1)
        out = VermaVector.zero(target) if _valid(target) else VermaVector(target, ())
        for w, c in x.terms.items():
            out = out + self.apply_escript(w, v).scale(c)
        return out

    # -- pairings -----------------------------------------------------------------------
    def escript_functional(self, script: Sequence[int]) -> list[Fraction]:
        """Row vector ``phi`` on the weight space hit by ``script`` with
        ``phi . coords(v) = <v* e_script, v>``."""
        script = tuple(script)
        got = self._escript_functionals.get(script)
        if got is not None:
            return got
        cur = zero_content(self.n)
        phi = [Fraction(1)]
        for a in script:
            cur = add_content(cur, unit_content(self.n, a))
            cols = self.e_columns(a, cur)
            phi = [sum((x * y for x, y in zip(phi, col) if x and y), Fraction(0)) for col in cols]
        return self._store(self._escript_functionals, script, phi)

    def pair_cyclic(self, script: Sequence[int], v: VermaVector) -> Fraction:
        script = tuple(script)
        if word_content(script, self.n) != v.content:
            return Fraction(0)
        phi = self.escript_functional(script)
        return sum((x * y for x, y in zip(phi, v.data) if x and y), Fraction(0))

    def theta_rows(self, m: Content) -> list[list[Fraction]]:
        """Row ``l`` is the functional ``theta(f(l) v) = v* omega(f(l))``.

        With ``f(l) = sum_a f_a Y_a`` this is ``x -> sum_a theta(Y_a v)(e_a x)``.
        """
        got = self._theta.get(m)
        if got is not None:
            return got
        ws = weight_space(self.p, m)
        dim = len(ws.pbw)
        if not any(m):
            rows = [[Fraction(1)]]
        else:
            rows = []
            for idx in range(dim):
                acc = [Fraction(0)] * dim
                for a, part in ws.block_parts(idx).items():
                    sub = add_content(m, unit_content(self.n, a), -1)
                    phi = linalg.vecmat(part, self.theta_rows(sub))
                    for b, col in enumerate(self.e_columns(a, m)):
                        acc[b] += sum((x * y for x, y in zip(phi, col) if x and y), Fraction(0))
                rows.append(acc)
        return self._store(self._theta, m, rows)

    def theta_rows_by_words(self, m: Content) -> list[list[Fraction]]:
        """Same rows as :meth:`theta_rows`, summed over the words ``w`` of ``f(l)``."""
        basis = enumerate_pbw(self.n, m)
        rows = []
        for l in basis:
            acc = [Fraction(0)] * len(basis)
            for w, c in expand_pbw_monomial(self.p, l).terms.items():
                phi = self.escript_functional(omega(w))
                for k, x in enumerate(phi):
                    if x:
                        acc[k] += c * x
            rows.append(acc)
        return rows

    def theta_functional(self, v: VermaVector) -> list[Fraction]:
        rows = self.theta_rows(v.content)
        return linalg.vecmat(list(v.data), rows)

    def gram_contravariant(self, m: Sequence[int], vectors: Sequence[VermaVector]) -> list[list[Fraction]]:
        m = tuple(m)
        for v in vectors:
            if v.content != m:
                raise ValueError(f"vector of content {v.content} in a Gram matrix of content {m}")
        thetas = [self.theta_functional(v) for v in vectors]
        return [[sum((x * y for x, y in zip(t, v.data) if x and y), Fraction(0)) for v in vectors] for t in thetas]

    def functional_of(self, op: Callable[[VermaVector], VermaVector], m: Content) -> list[Fraction]:
        """``b -> coefficient of v_lambda in op(basis_b)`` for an operator lowering ``m`` to 0."""
        out = []
        for b in basis_vectors(self.n, m):
            w = op(b)
            if any(w.content):
                raise ValueError("operator does not land in the highest weight space")
            out.append(w.data[0] if w.data else Fraction(0))
        return out

    # -- ideal quotient -----------------------------------------------------------------
    def ideal_subspace(self, j0: int, m: Content, k_max: int | None = None) -> linalg.EchelonBasis:
        """Echelon basis of ``span{f_jk w : j0 <= j <= k <= k_max}`` inside content ``m``."""
        k_max = self.n if k_max is None else k_max
        dim = len(enumerate_pbw(self.n, m)) if _valid(m) else 0
        basis = linalg.EchelonBasis(dim)
        for j in range(j0, self.n + 1):
            for k in range(j, k_max + 1):
                src = add_content(m, root_content(self.n, j, k), -1)
                if not _valid(src):
                    continue
                fjk = expand_root_vector(self.p, j, k)
                for w in basis_vectors(self.n, src):
                    basis.add(linalg.sparse_from_dense(self.apply_free(fjk, w).data))
        return basis

    def ideal_quotient_project(
        self, j0: int, v: VermaVector, k_max: int | None = None
    ) -> tuple[bool, VermaVector]:
        check_index(self.n, j0)
        basis = self.ideal_subspace(j0, v.content, k_max)
        red = basis.reduce(linalg.sparse_from_dense(v.data))
        residue = VermaVector(v.content, tuple(linalg.dense_from_sparse(red, len(v.data))))
        return (not red), residue

    def kernel(self, ops: Iterable[int], m: Content) -> list[VermaVector]:
        """Basis of the common kernel of ``e_i`` (i in ops) on content ``m``."""
        rows: list[list[Fraction]] = []
        for i in ops:
            cols = self.e_columns(i, m)
            height = len(cols[0]) if cols else 0
            rows.extend([col[r] for col in cols] for r in range(height))
        dim = len(enumerate_pbw(self.n, m))
        return [VermaVector(m, tuple(x)) for x in linalg.nullspace(rows, dim)]


@lru_cache(maxsize=128)
def module(p: Params) -> VermaModule:
    return VermaModule(p)


def omega(word: Sequence[int]) -> EScript:
    """Chevalley anti-involution on a monomial: reverse the letters, f <-> e."""
    return tuple(reversed(tuple(word)))


def act_f(p: Params, i: int, v: VermaVector) -> VermaVector:
    return module(p).act_f(i, v)


def act_e(p: Params, i: int, v: VermaVector) -> VermaVector:
    return module(p).act_e(i, v)


def act_t(p: Params, i: int, sign: int, v: VermaVector) -> VermaVector:
    return module(p).act_t(i, sign, v)


def apply_escript(p: Params, script: Sequence[int], v: VermaVector) -> VermaVector:
    return module(p).apply_escript(script, v)


def apply_free(p: Params, x: FreeElement, v: VermaVector) -> VermaVector:
    return module(p).apply_free(x, v)


def pair_cyclic(p: Params, script: Sequence[int], v: VermaVector) -> Fraction:
    return module(p).pair_cyclic(script, v)


def gram_contravariant(p: Params, m: Sequence[int], vectors: Sequence[VermaVector]) -> list[list[Fraction]]:
    return module(p).gram_contravariant(m, vectors)


def standard_gram(p: Params, m: Sequence[int]) -> list[list[Fraction]]:
    """Contravariant Gram matrix of the standard PBW basis of content ``m``."""
    m = tuple(m)
    return module(p).gram_contravariant(m, basis_vectors(p.n, m))


def ideal_quotient_project(p: Params, j0: int, v: VermaVector, k_max: int | None = None) -> tuple[bool, VermaVector]:
    return module(p).ideal_quotient_project(j0, v, k_max)


def root_vector_e(p: Params, i: int, j: int) -> FreeElement:
    """``e_ij = omega(f_ij)`` as a combination of e-words."""
    f = expand_root_vector(p, i, j)
    return FreeElement(p.n, f.content, {omega(w): c for w, c in f.terms.items()})
