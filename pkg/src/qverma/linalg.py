"""Exact Gaussian elimination over the rationals.

Sparse vectors are ``dict[int, Fraction]`` without stored zeros; dense matrices are lists
of rows. Sizes here are tiny (a few hundred columns at most), so clarity wins over speed.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Sparse = dict[int, Fraction]
Matrix = list[list[Fraction]]


def sparse_from_dense(row: Sequence[Fraction]) -> Sparse:
    return {j: Fraction(x) for j, x in enumerate(row) if x}


def dense_from_sparse(row: Sparse, size: int) -> list[Fraction]:
    out = [Fraction(0)] * size
    for j, x in row.items():
        out[j] = x
    return out


def axpy(target: Sparse, coeff: Fraction, source: Sparse) -> None:
    """``target += coeff * source`` in place, dropping cancellations."""
    if not coeff:
        return
    for j, x in source.items():
        v = target.get(j, 0) + coeff * x
        if v:
            target[j] = v
        else:
            target.pop(j, None)


class EchelonBasis:
    """Incrementally maintained echelon basis of a subspace of ``Q^ncols``.

    Each stored row is normalized to 1 at its pivot and carries no earlier pivot, so a
    single pass in insertion order reduces any vector to its canonical residue (zero on
    every pivot column).
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[Sparse] = []
        self.pivots: list[int] = []
        self._pivot_set: set[int] = set()

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sparse) -> Sparse:
        out = dict(vec)
        for piv, row in zip(self.pivots, self.rows):
            c = out.get(piv)
            if c:
                axpy(out, -c, row)
        return out

    def add(self, vec: Sparse) -> bool:
        """Insert ``vec``; return False when it was already in the span."""
        res = self.reduce(vec)
        if not res:
            return False
        piv = min(res)
        inv = 1 / res[piv]
        self.rows.append({j: x * inv for j, x in res.items()})
        self.pivots.append(piv)
        self._pivot_set.add(piv)
        return True

    def append_echelon(self, row: Sparse, pivot: int) -> None:
        """Append a row already normalized at ``pivot`` and free of every existing pivot.

        No reduction is done; callers vouch for the invariant (used for block-disjoint rows).
        """
        self.rows.append(row)
        self.pivots.append(pivot)
        self._pivot_set.add(pivot)

    def extend(self, vecs: Iterable[Sparse]) -> None:
        for v in vecs:
            self.add(v)

    def contains(self, vec: Sparse) -> bool:
        return not self.reduce(vec)

    def residue_table(self) -> tuple[list[int], dict[int, list[Fraction]]]:
        """Residues of all unit vectors, as dense rows over the free columns.

        Row ``k`` only meets pivots of rows inserted after it, so walking the rows backwards
        resolves every pivot column once. Returns ``(free_columns, table)`` where ``table``
        maps every column index to its residue.
        """
        free = self.free_columns()
        pos = {c: k for k, c in enumerate(free)}
        width = len(free)
        table: dict[int, list[Fraction]] = {}
        for c in free:
            unit = [Fraction(0)] * width
            unit[pos[c]] = Fraction(1)
            table[c] = unit
        for piv, row in zip(reversed(self.pivots), reversed(self.rows)):
            acc = [Fraction(0)] * width
            for c, x in row.items():
                if c == piv:
                    continue
                res = table[c]
                for j in range(width):
                    if res[j]:
                        acc[j] -= x * res[j]
            table[piv] = acc
        return free, table

    def free_columns(self) -> list[int]:
        return [j for j in range(self.ncols) if j not in self._pivot_set]


def identity(size: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Fraction(0)] * cols
        for k in range(inner):
            c = row[k]
            if c:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += c * bk[j]
        out.append(acc)
    return out


def matvec(a: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def vecmat(v: Sequence[Fraction], a: Matrix) -> list[Fraction]:
    cols = len(a[0]) if a else 0
    out = [Fraction(0)] * cols
    for c, row in zip(v, a):
        if c:
            for j in range(cols):
                if row[j]:
                    out[j] += c * row[j]
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def determinant(a: Matrix) -> Fraction:
    n = len(a)
    m = [list(map(Fraction, row)) for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` for singular input."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def rank(rows: Iterable[Sequence[Fraction]], ncols: int) -> int:
    basis = EchelonBasis(ncols)
    basis.extend(sparse_from_dense(r) for r in rows)
    return basis.rank


def nullspace(a: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : a x = 0}``."""
    basis = EchelonBasis(ncols)
    basis.extend(sparse_from_dense(r) for r in a)
    # back-substitute into reduced row echelon form
    order = sorted(range(basis.rank), key=lambda k: basis.pivots[k])
    rref = {basis.pivots[k]: dict(basis.rows[k]) for k in order}
    for piv in sorted(rref, reverse=True):
        row = rref[piv]
        for other_piv, other in rref.items():
            if other_piv != piv and other.get(piv):
                axpy(other, -other[piv], row)
    out = []
    for free in basis.free_columns():
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for piv, row in rref.items():
            x[piv] = -row.get(free, Fraction(0))
        out.append(x)
    return out


def is_identity(a: Matrix) -> bool:
    return all(x == (1 if i == j else 0) for i, row in enumerate(a) for j, x in enumerate(row))


def is_diagonal(a: Matrix) -> bool:
    return all(not x for i, row in enumerate(a) for j, x in enumerate(row) if i != j)
