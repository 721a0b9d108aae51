"""Words in the negative generators, the Serre ideal and PBW straightening.

The weight space ``U_m`` of ``U_q(n^-)`` is built from the spaces one letter below it: modulo
``sum_a f_a I`` it is ``(+)_a f_a U_{m - e_a}``, cut down by the images of the Serre
relations. PBW monomials ``f(l) = f(l_n) ... f(l_1)``, ``f(l_k) = f_kn^{l_kn} ... f_kk^{l_kk}``
give the coordinates. The plain word-space ideal (:func:`serre_span`) is kept as an
independent check of dimensions and straightening.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence

from . import linalg
from .qscalars import Content, Params, add_content, check_index, q_int, root_content

Word = tuple[int, ...]


class InternalInvariantViolation(RuntimeError):
    """Raised when the PBW monomials fail to be independent modulo the Serre ideal."""


def word_content(word: Sequence[int], n: int) -> Content:
    counts = [0] * n
    for a in word:
        counts[a - 1] += 1
    return tuple(counts)


def format_word(word: Word, letter: str = "f") -> str:
    return "".join(f"{letter}{a}" for a in word) or "1"


class FreeElement:
    """Rational combination of words sharing one content. Immutable by convention."""

    __slots__ = ("n", "content", "terms")

    def __init__(self, n: int, content: Sequence[int], terms: Mapping[Word, Fraction] | None = None):
        self.n = n
        self.content = tuple(content)
        self.terms: dict[Word, Fraction] = {}
        for w, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                if word_content(w, n) != self.content:
                    raise ValueError(f"word {w} does not have content {self.content}")
                self.terms[tuple(w)] = c

    @classmethod
    def word(cls, n: int, word: Sequence[int], coeff=1) -> "FreeElement":
        word = tuple(word)
        return cls(n, word_content(word, n), {word: Fraction(coeff)})

    @classmethod
    def unit(cls, n: int) -> "FreeElement":
        return cls.word(n, ())

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __add__(self, other: "FreeElement") -> "FreeElement":
        if self.content != other.content:
            raise ValueError("cannot add elements of different content")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FreeElement(self.n, self.content, out)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.n, self.content, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def scale(self, c) -> "FreeElement":
        return FreeElement(self.n, self.content, {w: c * x for w, x in self.terms.items()})

    def __rmul__(self, c) -> "FreeElement":
        return self.scale(c)

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return self.scale(other)
        out: dict[Word, Fraction] = {}
        for (u, a), (v, b) in itertools.product(self.terms.items(), other.terms.items()):
            w = u + v
            out[w] = out.get(w, 0) + a * b
        return FreeElement(self.n, add_content(self.content, other.content), out)

    def __pow__(self, k: int) -> "FreeElement":
        out = FreeElement.unit(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeElement) and self.content == other.content and self.terms == other.terms

    def __hash__(self):
        return hash((self.content, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{format_word(w)}" for w, c in self.items())


@dataclass(frozen=True, order=True)
class TriangularArray:
    """Exponents ``l_ij`` (1 <= i <= j <= n) stored row by row: l11..l1n, l22..l2n, ..."""

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.n * (self.n + 1) // 2:
            raise ValueError("wrong number of entries for a triangular array")
        if any(x < 0 for x in self.entries):
            raise ValueError("triangular array entries must be non-negative")

    @classmethod
    def zero(cls, n: int) -> "TriangularArray":
        return cls(n, (0,) * (n * (n + 1) // 2))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "TriangularArray":
        n = len(rows)
        for k, row in enumerate(rows, start=1):
            if len(row) != n - k + 1:
                raise ValueError(f"row {k} must have {n - k + 1} entries")
        return cls(n, tuple(x for row in rows for x in row))

    @classmethod
    def from_dict(cls, n: int, entries: Mapping[tuple[int, int], int]) -> "TriangularArray":
        return cls.from_rows([[entries.get((i, j), 0) for j in range(i, n + 1)] for i in range(1, n + 1)])

    def _offset(self, i: int) -> int:
        return (i - 1) * self.n - (i - 1) * (i - 2) // 2

    def get(self, i: int, j: int) -> int:
        if not 1 <= i <= j <= self.n:
            raise IndexError((i, j))
        return self.entries[self._offset(i) + j - i]

    def row(self, k: int) -> tuple[int, ...]:
        """``(l_kk, ..., l_kn)``."""
        start = self._offset(k)
        return self.entries[start : start + self.n - k + 1]

    def rows(self) -> list[tuple[int, ...]]:
        return [self.row(k) for k in range(1, self.n + 1)]

    def content(self) -> Content:
        m = [0] * self.n
        for i in range(1, self.n + 1):
            for k in range(i, self.n + 1):
                x = self.get(i, k)
                for j in range(i, k + 1):
                    m[j - 1] += x
        return tuple(m)

    def degree(self) -> int:
        return sum(self.content())

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(i, j): self.get(i, j) for i in range(1, self.n + 1) for j in range(i, self.n + 1)}

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.entries)) + ")"


def enumerate_words(n: int, m: Sequence[int]) -> list[Word]:
    """All words of content ``m`` in lexicographic order."""
    m = tuple(m)
    if any(x < 0 for x in m):
        return []
    return _words(n, m)


@lru_cache(maxsize=None)
def _words(n: int, m: Content) -> list[Word]:
    if not any(m):
        return [()]
    out = []
    for a in range(1, n + 1):
        if m[a - 1]:
            rest = tuple(x - (j == a - 1) for j, x in enumerate(m))
            out.extend((a,) + w for w in _words(n, rest))
    return out


def multinomial(m: Sequence[int]) -> int:
    out = factorial(sum(m))
    for x in m:
        out //= factorial(x)
    return out


def enumerate_pbw(n: int, m: Sequence[int]) -> list[TriangularArray]:
    """All triangular arrays of content ``m``, sorted by their entry tuples."""
    m = tuple(m)
    if len(m) != n:
        raise ValueError("content has wrong length")
    if any(x < 0 for x in m):
        return []
    return _pbw(n, m)


@lru_cache(maxsize=None)
def _pbw(n: int, m: Content) -> list[TriangularArray]:
    cells = [(i, k) for i in range(1, n + 1) for k in range(i, n + 1)]
    out: list[dict] = []

    def rec(idx: int, remaining: list[int], chosen: dict):
        if idx == len(cells):
            if not any(remaining):
                out.append(dict(chosen))
            return
        i, k = cells[idx]
        # once the cells of row i are exhausted, column i must be balanced
        cap = min(remaining[j - 1] for j in range(i, k + 1))
        for x in range(cap + 1):
            for j in range(i, k + 1):
                remaining[j - 1] -= x
            chosen[(i, k)] = x
            if k < n or remaining[i - 1] == 0:
                rec(idx + 1, remaining, chosen)
            for j in range(i, k + 1):
                remaining[j - 1] += x
        chosen.pop((i, k), None)

    rec(0, list(m), {})
    return sorted(TriangularArray.from_dict(n, d) for d in out)


def expand_root_vector(p: Params, i: int, j: int) -> FreeElement:
    """``f_ij = [f_i, f_{i+1 j}]_q`` expanded in words."""
    if i > j:
        raise ValueError(f"root vector needs i <= j, got ({i}, {j})")
    check_index(p.n, i)
    check_index(p.n, j)
    return _root_vector(p.n, p.q, i, j)


@lru_cache(maxsize=None)
def _root_vector(n: int, q: Fraction, i: int, j: int) -> FreeElement:
    fi = FreeElement.word(n, (i,))
    if i == j:
        return fi
    rest = _root_vector(n, q, i + 1, j)
    return fi * rest - (rest * fi).scale(q)


def expand_pbw_monomial(p: Params, l: TriangularArray) -> FreeElement:
    return _pbw_monomial(p.n, p.q, l)


@lru_cache(maxsize=None)
def _pbw_monomial(n: int, q: Fraction, l: TriangularArray) -> FreeElement:
    out = FreeElement.unit(n)
    for k in range(n, 0, -1):
        for j in range(n, k - 1, -1):
            e = l.get(k, j)
            if e:
                out = out * (_root_vector(n, q, k, j) ** e)
    return out


def serre_relations(p: Params) -> list[FreeElement]:
    """Defining relations of ``U_q(n^-)``."""
    n = p.n
    two = q_int(p, 2)
    rels = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if abs(i - j) == 1:
                rels.append(
                    FreeElement.word(n, (i, i, j))
                    + FreeElement.word(n, (i, j, i), -two)
                    + FreeElement.word(n, (j, i, i))
                )
            elif i < j and abs(i - j) > 1:
                rels.append(FreeElement.word(n, (i, j)) - FreeElement.word(n, (j, i)))
    return rels


class WeightSpaceData:
    """Straightening data for the weight space ``U_m`` of content ``m``.

    Modulo ``sum_a f_a I_{m - e_a}`` the free algebra in content ``m`` is the block space
    ``B_m = (+)_a f_a (x) U_{m - e_a}``, with block ``a`` carrying PBW coordinates of
    ``U_{m - e_a}``. ``U_m`` is ``B_m`` modulo the images of ``r * y`` for the Serre
    relations ``r`` and PBW basis vectors ``y``. Left multiplication by ``f_a`` is then the
    block embedding, so no word ever has to be expanded.
    """

    def __init__(self, n: int, q: Fraction, m: Content):
        self.n, self.q, self.m = n, q, m
        self.pbw = enumerate_pbw(n, m)
        self.pbw_index = {l: k for k, l in enumerate(self.pbw)}
        self.blocks: dict[int, tuple[int, "WeightSpaceData"]] = {}
        size = 0
        for a in range(1, n + 1):
            if m[a - 1]:
                sub = _weight_space(n, q, add_content(m, root_content(n, a, a), -1))
                self.blocks[a] = (size, sub)
                size += len(sub.pbw)
        self.block_size = size
        self._left: dict[int, list[list[Fraction]]] = {}
        if not any(m):
            self.relations = linalg.EchelonBasis(0)
            self.free = []
            self._residues: dict[int, list[Fraction]] = {}
            self.images = [{}]
            self._inv = [[Fraction(1)]]
            return
        rels = linalg.EchelonBasis(size)
        for r in _serre_relations(n, q):
            rest = add_content(m, r.content, -1)
            if any(x < 0 for x in rest):
                continue
            for y in range(len(enumerate_pbw(n, rest))):
                rels.add(self._image_of_product(r, rest, _unit(len(enumerate_pbw(n, rest)), y)))
        self.relations = rels
        free, residues = rels.residue_table()
        if len(free) != len(self.pbw):
            raise InternalInvariantViolation(
                f"content {m}: block space {size}, relation rank {rels.rank}, but {len(self.pbw)} PBW arrays"
            )
        self.free = free
        self._residues = residues
        self.images = [self._pbw_image(l) for l in self.pbw]
        square = [self.residue(img) for img in self.images]
        try:
            self._inv = linalg.inverse(square)
        except ZeroDivisionError:
            raise InternalInvariantViolation(f"content {m}: PBW monomials dependent modulo the Serre ideal") from None

    # -- block space --------------------------------------------------------------------
    def _image_of_product(self, x: "FreeElement", rest: Content, y: list[Fraction]) -> linalg.Sparse:
        """Block vector of ``x * Y`` where ``Y`` has PBW coordinates ``y`` in content ``rest``."""
        out: linalg.Sparse = {}
        for w, c in x.terms.items():
            head = w[0]
            inner = _apply_word_coords(self.n, self.q, w[1:], rest, y)
            off = self.blocks[head][0]
            linalg.axpy(out, c, {off + k: v for k, v in enumerate(inner) if v})
        return out

    def _pbw_image(self, l: "TriangularArray") -> linalg.Sparse:
        n = self.n
        for k in range(n, 0, -1):
            for j in range(n, k - 1, -1):
                if l.get(k, j):
                    entries = dict(l.as_dict())
                    entries[(k, j)] -= 1
                    rest_l = TriangularArray.from_dict(n, entries)
                    rest = rest_l.content()
                    sub = _weight_space(n, self.q, rest)
                    y = _unit(len(sub.pbw), sub.pbw_index[rest_l])
                    return self._image_of_product(_root_vector(n, self.q, k, j), rest, y)
        raise AssertionError("zero array in a nonzero content")

    def residue(self, vec: linalg.Sparse) -> list[Fraction]:
        """Class of a block vector modulo the relations, over the free columns."""
        out = [Fraction(0)] * len(self.free)
        for c, x in vec.items():
            res = self._residues[c]
            for j, y in enumerate(res):
                if y:
                    out[j] += x * y
        return out

    def coords_of_block(self, vec: linalg.Sparse) -> list[Fraction]:
        if not any(self.m):
            return [Fraction(vec.get(0, 0))] if vec else [Fraction(0)]
        return linalg.vecmat(self.residue(vec), self._inv)

    def block_parts(self, idx: int) -> dict[int, list[Fraction]]:
        """A preimage of basis vector ``idx``: ``f(l) = sum_a f_a Y_a`` with ``Y_a`` in content ``m - e_a``."""
        img = self.images[idx]
        out = {}
        for a, (off, sub) in self.blocks.items():
            part = [Fraction(img.get(off + k, 0)) for k in range(len(sub.pbw))]
            if any(part):
                out[a] = part
        return out

    def left_columns(self, a: int) -> list[list[Fraction]]:
        """Columns of ``f_a``: PBW coordinates of ``f_a f(l')`` for ``l'`` of content ``m - e_a``."""
        got = self._left.get(a)
        if got is None:
            off, sub = self.blocks[a]
            got = [self.coords_of_block({off + k: Fraction(1)}) for k in range(len(sub.pbw))]
            self._left[a] = got
        return got

    def word_coords(self, w: Word) -> list[Fraction]:
        return list(_word_coords(self.n, self.q, tuple(w)))

    def straighten(self, x: FreeElement) -> list[Fraction]:
        if x.content != self.m:
            raise ValueError(f"element has content {x.content}, expected {self.m}")
        out = [Fraction(0)] * len(self.pbw)
        for w, c in x.terms.items():
            for k, y in enumerate(_word_coords(self.n, self.q, w)):
                if y:
                    out[k] += c * y
        return out


def _unit(size: int, k: int) -> list[Fraction]:
    out = [Fraction(0)] * size
    out[k] = Fraction(1)
    return out


@lru_cache(maxsize=None)
def _serre_relations(n: int, q: Fraction) -> tuple[FreeElement, ...]:
    return tuple(serre_relations(Params(n, q, (Fraction(1),) * n)))


def _apply_word_coords(n: int, q: Fraction, word: Word, m: Content, y: Sequence[Fraction]) -> list[Fraction]:
    """Left multiply the element with coordinates ``y`` (content ``m``) by ``word``."""
    cur = list(y)
    content = m
    for a in reversed(word):
        content = add_content(content, root_content(n, a, a))
        cols = _weight_space(n, q, content).left_columns(a)
        nxt = [Fraction(0)] * len(cols[0]) if cols else []
        for c, col in zip(cur, cols):
            if c:
                for k, v in enumerate(col):
                    if v:
                        nxt[k] += c * v
        cur = nxt
    return cur


@lru_cache(maxsize=None)
def _word_coords(n: int, q: Fraction, w: Word) -> tuple[Fraction, ...]:
    return tuple(_apply_word_coords(n, q, w, (0,) * n, [Fraction(1)]))


_lock = threading.Lock()
_ideal_cache: dict[tuple, linalg.EchelonBasis] = {}
_space_cache: dict[tuple, WeightSpaceData] = {}


def _letter_offsets(n: int, m: Content) -> dict[int, int]:
    """Index of the first word starting with each letter (words are in lex order)."""
    out, pos = {}, 0
    for a in range(1, n + 1):
        out[a] = pos
        if m[a - 1]:
            pos += len(_words(n, add_content(m, root_content(n, a, a), -1)))
    return out


def _ideal(n: int, q: Fraction, m: Content) -> linalg.EchelonBasis:
    """Echelon basis of the Serre ideal component in the full word space of content ``m``.

    Independent of :class:`WeightSpaceData`; it backs the dimension check and
    :func:`reduce_modulo_serre`. ``I_m = sum_i f_i I_{m - e_i} + sum_r r * words``. Left
    multiplication by ``f_i`` maps words onto the contiguous block starting with ``i``, in
    order, so those rows are appended without elimination.
    """
    key = (n, q, m)
    got = _ideal_cache.get(key)
    if got is not None:
        return got
    words = enumerate_words(n, m)
    index = {w: k for k, w in enumerate(words)}
    basis = linalg.EchelonBasis(len(words))
    offsets = _letter_offsets(n, m)
    for i in range(1, n + 1):
        sub = add_content(m, root_content(n, i, i), -1)
        if any(x < 0 for x in sub):
            continue
        sub_basis = _ideal(n, q, sub)
        off = offsets[i]
        for piv, row in zip(sub_basis.pivots, sub_basis.rows):
            basis.append_echelon({off + c: x for c, x in row.items()}, off + piv)
    for r in _serre_relations(n, q):
        rest = add_content(m, r.content, -1)
        if any(x < 0 for x in rest):
            continue
        for v in enumerate_words(n, rest):
            basis.add({index[w + v]: c for w, c in r.terms.items()})
    with _lock:
        _ideal_cache.setdefault(key, basis)
    return _ideal_cache[key]


def weight_space(p: Params, m: Sequence[int]) -> WeightSpaceData:
    return _weight_space(p.n, p.q, tuple(m))


def _weight_space(n: int, q: Fraction, m: Content) -> WeightSpaceData:
    key = (n, q, m)
    got = _space_cache.get(key)
    if got is None:
        got = WeightSpaceData(n, q, m)
        with _lock:
            got = _space_cache.setdefault(key, got)
    return got


def serre_span(p: Params, m: Sequence[int]) -> list[FreeElement]:
    """Echelonized basis of the Serre ideal component of content ``m``."""
    m = tuple(m)
    if any(x < 0 for x in m):
        return []
    ideal = _ideal(p.n, p.q, m)
    words = enumerate_words(p.n, m)
    return [FreeElement(p.n, m, {words[c]: x for c, x in row.items()}) for row in ideal.rows]


def serre_rank(p: Params, m: Sequence[int]) -> int:
    m = tuple(m)
    if any(x < 0 for x in m):
        return 0
    return _ideal(p.n, p.q, m).rank


def reduce_modulo_serre(p: Params, x: FreeElement) -> FreeElement:
    """Canonical residue of ``x`` modulo the ideal (supported off the pivot words)."""
    ideal = _ideal(p.n, p.q, x.content)
    words = enumerate_words(p.n, x.content)
    index = {w: k for k, w in enumerate(words)}
    red = ideal.reduce({index[w]: c for w, c in x.terms.items()})
    return FreeElement(p.n, x.content, {words[c]: v for c, v in red.items()})


def straighten(p: Params, m: Sequence[int], x: FreeElement) -> dict[TriangularArray, Fraction]:
    """PBW coordinates of ``x`` modulo the Serre ideal."""
    m = tuple(m)
    if x.content != m:
        raise ValueError(f"element has content {x.content}, expected {m}")
    ws = weight_space(p, m)
    return {l: c for l, c in zip(ws.pbw, ws.straighten(x)) if c}


def expand_coords(p: Params, m: Sequence[int], coords: Sequence[Fraction]) -> FreeElement:
    """Word expansion of ``sum_l coords[l] * f(l)`` (dense coordinates over enumerate_pbw)."""
    m = tuple(m)
    out = FreeElement(p.n, m)
    for l, c in zip(enumerate_pbw(p.n, m), coords):
        if c:
            out = out + expand_pbw_monomial(p, l).scale(c)
    return out


def contents_up_to(n: int, depth: int) -> Iterator[Content]:
    """All contents of total degree <= depth, by degree then lexicographically."""
    for d in range(depth + 1):
        for m in sorted(_compositions(n, d)):
            yield m


def _compositions(n: int, d: int) -> Iterable[Content]:
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _compositions(n - 1, d - first):
            yield (first,) + rest
