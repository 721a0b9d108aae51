"""Exact scalars: q-brackets, the A_n Cartan pairing and weight specializations.

Every weight is carried by its *content* ``m``, meaning ``mu = lambda - sum_j m_j alpha_j``,
and every power ``q^x`` is carried as an exact rational. The highest weight enters only
through ``z_i = q^{lambda_i}``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Content = tuple[int, ...]

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or an integer literal; floats are rejected."""
    s = text.strip()
    if not s or any(c in s for c in ".eE"):
        raise ValueError(f"not an exact rational literal: {text!r}")
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Params:
    """Rank ``n``, deformation ``q`` and highest-weight specialization ``z_i = q^{lambda_i}``."""

    n: int
    q: Fraction
    z: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", as_fraction(self.q))
        object.__setattr__(self, "z", tuple(as_fraction(v) for v in self.z))
        if self.n < 1:
            raise ValueError("rank n must be >= 1")
        if self.q in (0, 1, -1):
            raise ValueError("q must not be 0, 1 or -1")
        if len(self.z) != self.n:
            raise ValueError(f"expected {self.n} values of z, got {len(self.z)}")
        if any(v == 0 for v in self.z):
            raise ValueError("z_i must be nonzero")

    def with_z(self, z: Sequence) -> "Params":
        return Params(self.n, self.q, tuple(z))

    def describe(self) -> dict:
        return {
            "n": self.n,
            "q": format_rational(self.q),
            "z": [format_rational(v) for v in self.z],
        }


def fixed_profile(n: int) -> Params:
    """The default evaluation point: q = 2, z = (3, 5, 7, ...)."""
    return Params(n, Fraction(2), tuple(Fraction(p) for p in SMALL_PRIMES[1 : n + 1]))


def random_params(n: int, rng: random.Random, max_prime: int = 13) -> Params:
    """Draw q and z as ratios of small primes (q never +-1).

    Callers that need genericity should resample through ``formulas.random_generic_params``.
    """
    primes = [p for p in SMALL_PRIMES if p <= max_prime]

    def draw() -> Fraction:
        a, b = rng.choice(primes), rng.choice(primes + [1])
        x = Fraction(a, b) if rng.random() < 0.5 else Fraction(b, a)
        return -x if rng.random() < 0.15 else x

    q = Fraction(1)
    while q in (1, -1):
        q = draw()
        q = abs(q)
    return Params(n, q, tuple(draw() for _ in range(n)))


def check_index(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"index {i} out of range 1..{n}")


def cartan_pairing(i: int, j: int, n: int | None = None) -> int:
    """``(alpha_i, alpha_j)`` for the simple roots of A_n."""
    if n is not None:
        check_index(n, i)
        check_index(n, j)
    elif i < 1 or j < 1:
        raise IndexError("simple root indices start at 1")
    if i == j:
        return 2
    if abs(i - j) == 1:
        return -1
    return 0


def zero_content(n: int) -> Content:
    return (0,) * n


def unit_content(n: int, i: int) -> Content:
    return tuple(1 if s == i else 0 for s in range(1, n + 1))


def root_content(n: int, i: int, k: int) -> Content:
    """Content of the positive root ``alpha_i + ... + alpha_k``."""
    return tuple(1 if i <= s <= k else 0 for s in range(1, n + 1))


def add_content(a: Sequence[int], b: Sequence[int], sign: int = 1) -> Content:
    return tuple(x + sign * y for x, y in zip(a, b))


def q_power_of_weight(p: Params, m: Sequence[int], i: int) -> Fraction:
    """``q^{(mu, alpha_i)}`` for ``mu = lambda - sum_j m_j alpha_j``."""
    check_index(p.n, i)
    shift = sum(m[j - 1] * cartan_pairing(j, i) for j in range(max(1, i - 1), min(p.n, i + 1) + 1))
    return p.z[i - 1] * p.q ** (-shift)


def q_bracket_from_power(p: Params, Q: Fraction) -> Fraction:
    """``[x]_q`` given ``Q = q^x``."""
    if Q == 0:
        raise ZeroDivisionError("q-bracket of a zero power")
    Q = Fraction(Q)
    return (Q - 1 / Q) / (p.q - 1 / p.q)


def q_int(p: Params, k: int) -> Fraction:
    return q_bracket_from_power(p, p.q**k)


def q_factorial(p: Params, k: int) -> Fraction:
    if k < 0:
        raise ValueError("q-factorial of a negative integer")
    out = Fraction(1)
    for j in range(1, k + 1):
        out *= q_int(p, j)
    return out


def mu_power(p: Params, m: Sequence[int], i: int, j: int) -> Fraction:
    """``q^{mu_ij}`` with ``mu_ij = mu_i + ... + mu_j + j - i``."""
    if i > j:
        raise ValueError(f"mu_power needs i <= j, got ({i}, {j})")
    out = p.q ** (j - i)
    for s in range(i, j + 1):
        out *= q_power_of_weight(p, m, s)
    return out


def bracket_is_zero(Q: Fraction) -> bool:
    """``[x]_q = 0`` exactly when ``Q^2 = 1``."""
    return Q * Q == 1
