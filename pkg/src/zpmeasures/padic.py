"""Exact rational arithmetic with p-adic views.

All scalars in this package are `fractions.Fraction` values; a "p-adic
number" is an exact rational inspected through its p-adic valuation and
canonical residue representatives.  Nothing here is approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Rat = Fraction

#: valuation of zero; compares correctly against any integer valuation
INF = math.inf


class PIntegralityError(ValueError):
    """Raised when an operation needs a p-integral value and got none."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeContext:
    """The fixed prime, the deepest stored level and a comparison exponent."""

    p: int
    n_max: int
    prec: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if self.prec < 1:
            raise ValueError("prec must be >= 1")

    def modulus(self, n: int) -> int:
        return self.p ** n


def vp(x, p: int):
    """p-adic valuation of a rational; INF for x = 0."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def repr_mod(c, p: int, n: int) -> int:
    """Canonical representative of c in [0, p^n).

    Works for any rational with denominator coprime to p: the denominator is
    inverted mod p^n, which matters because representatives of values such as
    chi(sigma)^{-1} * a are needed throughout.
    """
    c = Fraction(c)
    m = p ** n
    if m == 1:
        return 0
    if c.denominator % p == 0:
        raise PIntegralityError(f"{c} is not p-integral at p = {p}")
    inv = pow(c.denominator, -1, m)
    return (c.numerator * inv) % m


def repr_mod_pos(c, p: int, n: int) -> int:
    """Representative of c in (0, p^n]: as repr_mod but 0 is read as p^n.

    This is the indexing used by the level formulas that enumerate residues
    as 1, ..., p^n.
    """
    r = repr_mod(c, p, n)
    return p ** n if r == 0 else r


def binom(c, k: int) -> Rat:
    """Generalized binomial coefficient c(c-1)...(c-k+1)/k!."""
    if k < 0:
        raise ValueError("k must be >= 0")
    c = Fraction(c)
    out = Fraction(1)
    for j in range(k):
        out *= (c - j)
    return out / math.factorial(k)


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Rat:
    """k-th Bernoulli number, convention B_1 = -1/2.

    Computed from sum_{j=0}^{k} C(k+1, j) B_j = 0 with B_0 = 1.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Fraction(1)
    acc = Fraction(0)
    for j in range(k):
        acc += math.comb(k + 1, j) * bernoulli(j)
    return -acc / (k + 1)


def bernoulli_poly(k: int, x) -> Rat:
    """Bernoulli polynomial B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    x = Fraction(x)
    return sum((math.comb(k, j) * bernoulli(j) * x ** (k - j) for j in range(k + 1)),
               Fraction(0))


def format_rat(x) -> str:
    """Serialize a rational as "num/den", denominator omitted when 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Rat:
    """Parse a "num/den" (or plain integer) string."""
    return Fraction(text.strip())
