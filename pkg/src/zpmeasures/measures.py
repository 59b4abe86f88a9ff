"""Measures on (Z_p)^m stored as compatible level families.

A measure is kept as its full table of values on (Z/p^n)^m for every
0 <= n <= n_max.  The defining compatibility is the distribution relation:
the value at a level-n point equals the sum of the values at its p^m lifts
one level up.  Everything downstream (box integrals, Iwasawa transforms,
the octagon checks) consumes these tables.

Finite Dirac combinations get a second, exact representation (`DiracCombo`)
whose box integrals are evaluated at the true integer points; the identities
about sign/shift changes of variables hold exactly only in that form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .mpoly import MPoly, binom_poly
from .padic import (PIntegralityError, PrimeContext, Rat, format_rat,
                    repr_mod, vp)


def residues(p: int, n: int, dim: int):
    """All points of (Z/p^n)^dim as tuples."""
    return itertools.product(range(p ** n), repeat=dim)


@dataclass(frozen=True)
class LevelFamily:
    """A measure (or bounded-denominator distribution) up to level n_max."""

    ctx: PrimeContext
    dim: int
    tables: tuple  # tables[n]: dict point-tuple -> Fraction
    denom_bound: int

    @property
    def n_max(self) -> int:
        return len(self.tables) - 1

    def value(self, n: int, point) -> Rat:
        return self.tables[n][tuple(point)]

    @classmethod
    def build(cls, ctx: PrimeContext, dim: int, fn: Callable, n_max=None) -> "LevelFamily":
        """Tabulate fn(n, point) for all stored levels."""
        if n_max is None:
            n_max = ctx.n_max
        tables = []
        worst = 0
        for n in range(n_max + 1):
            table = {}
            for a in residues(ctx.p, n, dim):
                v = Fraction(fn(n, a))
                table[a] = v
                if v:
                    worst = max(worst, -min(0, vp(v, ctx.p)))
            tables.append(table)
        return cls(ctx, dim, tuple(tables), worst)

    @classmethod
    def zero(cls, ctx: PrimeContext, dim: int, n_max=None) -> "LevelFamily":
        return cls.build(ctx, dim, lambda n, a: 0, n_max)

    def truncated(self, n_max: int) -> "LevelFamily":
        if n_max >= self.n_max:
            return self
        return LevelFamily(self.ctx, self.dim, self.tables[: n_max + 1], self.denom_bound)

    def is_zero(self) -> bool:
        return all(not v for t in self.tables for v in t.values())

    def total_mass(self) -> Rat:
        return self.tables[0][(0,) * self.dim]

    def csv_lines(self):
        """Rows "n,a_1,..,a_m,value" for every stored entry."""
        yield ",".join(["n"] + [f"a_{k+1}" for k in range(self.dim)] + ["value"])
        for n, table in enumerate(self.tables):
            for a in sorted(table):
                yield ",".join([str(n)] + [str(x) for x in a] + [format_rat(table[a])])


@dataclass
class DistributionReport:
    passed: bool
    level: int | None = None
    point: tuple | None = None
    defect: Rat | None = None

    def __bool__(self):
        return self.passed


def lifts(point, p: int, n: int, dim: int):
    """The p^dim level-(n+1) points over a level-n point."""
    shifts = itertools.product(range(p), repeat=dim)
    pn = p ** n
    for ks in shifts:
        yield tuple(a + k * pn for a, k in zip(point, ks))


def validate_distribution(mu: LevelFamily) -> DistributionReport:
    """Check the distribution relation exactly at every stored level pair."""
    p = mu.ctx.p
    for n in range(mu.n_max):
        for a in residues(p, n, mu.dim):
            total = sum((mu.tables[n + 1][b] for b in lifts(a, p, n, mu.dim)), Fraction(0))
            defect = mu.tables[n][a] - total
            if defect:
                return DistributionReport(False, n, a, defect)
    return DistributionReport(True)


def linear_combine(coeffs: Sequence, mus: Sequence[LevelFamily]) -> LevelFamily:
    if not mus:
        raise ValueError("nothing to combine")
    ctx, dim = mus[0].ctx, mus[0].dim
    for m in mus:
        if m.ctx != ctx or m.dim != dim:
            raise ValueError("context/dimension mismatch")
    n_max = min(m.n_max for m in mus)
    coeffs = [Fraction(c) for c in coeffs]

    def fn(n, a):
        return sum((c * m.tables[n][a] for c, m in zip(coeffs, mus)), Fraction(0))

    return LevelFamily.build(ctx, dim, fn, n_max)


def translate(mu: LevelFamily, shift) -> LevelFamily:
    """T_c: the pushforward of mu under x -> x + c, tablewise."""
    shift = [Fraction(c) for c in shift]
    if len(shift) != mu.dim:
        raise ValueError("shift dimension mismatch")
    p = mu.ctx.p
    for c in shift:
        if vp(c, p) < 0:
            raise PIntegralityError(f"shift {c} is not p-integral")

    def fn(n, a):
        pn = p ** n
        src = tuple((x - repr_mod(c, p, n)) % pn for x, c in zip(a, shift))
        return mu.tables[n][src]

    return LevelFamily.build(mu.ctx, mu.dim, fn, mu.n_max)


def scale_action(mu: LevelFamily, d) -> LevelFamily:
    """m_d, also written mu o d^{-1}: pushforward under x -> d*x (d a unit)."""
    d = Fraction(d)
    p = mu.ctx.p
    if vp(d, p) != 0:
        raise ValueError(f"{d} is not a unit at p = {p}")

    def fn(n, a):
        pn = p ** n
        dinv = repr_mod(1 / d, p, n)
        src = tuple((dinv * x) % pn for x in a)
        return mu.tables[n][src]

    return LevelFamily.build(mu.ctx, mu.dim, fn, mu.n_max)


def pushforward_affine(mu: LevelFamily, coords) -> LevelFamily:
    """Pushforward under x_i -> eps_i * x_i + c_i, with NO global sign factor.

    coords is a sequence of (eps, c) pairs, eps in {+1, -1}, c p-integral.
    """
    coords = [(int(e), Fraction(c)) for e, c in coords]
    if len(coords) != mu.dim:
        raise ValueError("coordinate map dimension mismatch")
    p = mu.ctx.p
    for e, c in coords:
        if e not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if vp(c, p) < 0:
            raise PIntegralityError(f"shift {c} is not p-integral")

    def fn(n, a):
        pn = p ** n
        src = tuple((e * (x - repr_mod(c, p, n))) % pn for x, (e, c) in zip(a, coords))
        return mu.tables[n][src]

    return LevelFamily.build(mu.ctx, mu.dim, fn, mu.n_max)


def signed_perm_action(mu: LevelFamily, perm: Sequence[int], eps: Sequence[int]) -> LevelFamily:
    """One element of the signed permutation group acting on a measure.

    perm is the permutation as a 0-based tuple (position j of the output map
    reads coordinate perm[j]); eps are the signs.  The measure additionally
    picks up the product of the signs, so summing over the whole group kills
    everything odd.
    """
    m = mu.dim
    perm = tuple(perm)
    eps = tuple(int(e) for e in eps)
    if sorted(perm) != list(range(m)) or len(eps) != m:
        raise ValueError("bad group element")
    sign = 1
    for e in eps:
        if e not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        sign *= e
    p = mu.ctx.p

    def fn(n, a):
        pn = p ** n
        src = tuple((eps[j] * a[perm[j]]) % pn for j in range(m))
        return sign * mu.tables[n][src]

    return LevelFamily.build(mu.ctx, mu.dim, fn, mu.n_max)


def signed_group(m: int):
    """All 2^m * m! elements (perm, eps) of the signed permutation group."""
    for perm in itertools.permutations(range(m)):
        for eps in itertools.product((1, -1), repeat=m):
            yield perm, eps


def exterior_product(alpha: LevelFamily, beta: LevelFamily) -> LevelFamily:
    """(alpha . beta)^{(n)}(a, b) = alpha^{(n)}(a) * beta^{(n)}(b)."""
    if alpha.ctx != beta.ctx:
        raise ValueError("context mismatch")
    i = alpha.dim
    n_max = min(alpha.n_max, beta.n_max)

    def fn(n, ab):
        return alpha.tables[n][ab[:i]] * beta.tables[n][ab[i:]]

    return LevelFamily.build(alpha.ctx, alpha.dim + beta.dim, fn, n_max)


def exterior_power(alpha: LevelFamily, m: int) -> LevelFamily:
    if m == 0:
        return LevelFamily.build(alpha.ctx, 0, lambda n, a: 1, alpha.n_max)
    out = alpha
    for _ in range(m - 1):
        out = exterior_product(out, alpha)
    return out


@dataclass(frozen=True)
class GradedSequence:
    """A finite list (mu_0, mu_1, ..., mu_M), mu_i of dimension i."""

    entries: tuple

    def __post_init__(self):
        for i, mu in enumerate(self.entries):
            if mu.dim != i:
                raise ValueError("entry dimensions must be 0, 1, 2, ...")

    @property
    def top(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, i):
        return self.entries[i]


def star_convolution(a: GradedSequence, b: GradedSequence) -> GradedSequence:
    """Degreewise sum of exterior products: c_i = sum_{j+k=i} a_j . b_k."""
    top = min(a.top, b.top)
    out = []
    for i in range(top + 1):
        parts = [exterior_product(a[j], b[i - j]) for j in range(i + 1)]
        out.append(linear_combine([1] * len(parts), parts))
    return GradedSequence(tuple(out))


def unit_sequence(ctx: PrimeContext, top: int) -> GradedSequence:
    """(1, 0, 0, ...): the two-sided identity for the star product."""
    entries = [LevelFamily.build(ctx, 0, lambda n, a: 1)]
    for i in range(1, top + 1):
        entries.append(LevelFamily.zero(ctx, i))
    return GradedSequence(tuple(entries))


def box_integral(mu: LevelFamily, base, level: int, poly: MPoly, eval_level: int):
    """Riemann sum of poly against mu over the box base + p^level * (Z_p)^dim.

    Returns (value, guarantee): the true integral is congruent to the value
    mod p^guarantee.  The guarantee is computed pessimistically as
    (eval_level - level) - denom_bound - (worst denominator valuation in poly).
    """
    p = mu.ctx.p
    base = tuple(int(x) % p ** level for x in base) if level else (0,) * mu.dim
    if eval_level > mu.n_max or eval_level < level:
        raise ValueError("evaluation level out of stored range")
    if poly.nvars != mu.dim:
        raise ValueError("integrand variable count mismatch")
    m = eval_level - level
    pl, q = p ** level, p ** m
    total = Fraction(0)
    table = mu.tables[eval_level]
    for ks in itertools.product(range(q), repeat=mu.dim):
        a = tuple(b + k * pl for b, k in zip(base, ks))
        w = table[a]
        if w:
            total += poly.evaluate(a) * w
    guarantee = m - mu.denom_bound - poly.denominator_valuation(p)
    return total, guarantee


def moment(mu: LevelFamily, exps, eval_level: int):
    """Integral of prod x_k^{e_k}, a box_integral over the full space."""
    poly = MPoly.const(mu.dim, 1)
    for k, e in enumerate(exps):
        poly = poly * (MPoly.var(mu.dim, k) ** e)
    return box_integral(mu, (0,) * mu.dim, 0, poly, eval_level)


@dataclass
class IwasawaPoly:
    """Truncated transform: coefficient table plus per-coefficient guarantees."""

    dim: int
    terms: int
    coeffs: dict  # exponent tuple -> Fraction
    guarantees: dict  # exponent tuple -> int

    def to_json_dict(self):
        out = []
        for e in sorted(self.coeffs):
            out.append({"exp": list(e), "value": format_rat(self.coeffs[e]),
                        "guarantee": self.guarantees[e]})
        return {"dim": self.dim, "terms": self.terms, "coeffs": out}

    def coefficient(self, exps) -> Rat:
        return self.coeffs.get(tuple(exps), Fraction(0))


def iwasawa_P(mu: LevelFamily, terms: int, eval_level: int) -> IwasawaPoly:
    """The transform determined by [1] -> 1 + T.

    Coefficient of prod T_k^{j_k} is the integral of prod binom(x_k, j_k);
    it is correct mod p^(eval_level - denom_bound - sum vp(j_k!)).
    """
    p = mu.ctx.p
    coeffs, guars = {}, {}
    for j in itertools.product(range(terms + 1), repeat=mu.dim):
        poly = MPoly.const(mu.dim, 1)
        for k, jk in enumerate(j):
            poly = poly * binom_poly(mu.dim, k, jk)
        value, _ = box_integral(mu, (0,) * mu.dim, 0, poly, eval_level)
        coeffs[j] = value
        guars[j] = eval_level - mu.denom_bound - sum(vp(math.factorial(jk), p) for jk in j)
    return IwasawaPoly(mu.dim, terms, coeffs, guars)


def transform_F(mu: LevelFamily, terms: int, eval_level: int) -> IwasawaPoly:
    """Exponential form of the transform: coefficients are moments / factorials."""
    p = mu.ctx.p
    coeffs, guars = {}, {}
    for j in itertools.product(range(terms + 1), repeat=mu.dim):
        value, _ = moment(mu, j, eval_level)
        fact = math.prod(math.factorial(jk) for jk in j)
        coeffs[j] = value / fact
        guars[j] = eval_level - mu.denom_bound - vp(fact, p)
    return IwasawaPoly(mu.dim, terms, coeffs, guars)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def transform_F_via_P(pt: IwasawaPoly, p: int) -> IwasawaPoly:
    """Substitute T_k = exp(X_k) - 1 into a truncated transform.

    Independent route to the exponential coefficients:
    (e^X - 1)^j = j! sum_i S(i, j) X^i / i!.
    """
    coeffs, guars = {}, {}
    for i in itertools.product(range(pt.terms + 1), repeat=pt.dim):
        total = Fraction(0)
        guarantee = None
        for j in itertools.product(*(range(ik + 1) for ik in i)):
            factor = Fraction(1)
            for ik, jk in zip(i, j):
                factor *= Fraction(math.factorial(jk) * stirling2(ik, jk),
                                   math.factorial(ik))
            if not factor:
                continue
            cj = pt.coeffs.get(j, Fraction(0))
            total += cj * factor
            g = pt.guarantees[j] + min(0, vp(factor, p))
            guarantee = g if guarantee is None else min(guarantee, g)
        coeffs[i] = total
        guars[i] = guarantee if guarantee is not None else 0
    return IwasawaPoly(pt.dim, pt.terms, coeffs, guars)


def iwasawa_swap(pt: IwasawaPoly, perm) -> IwasawaPoly:
    """Permute the T variables: coefficient of T^e moves to T^{e o perm}."""
    perm = tuple(perm)
    coeffs = {tuple(e[perm[k]] for k in range(pt.dim)): c for e, c in pt.coeffs.items()}
    guars = {tuple(e[perm[k]] for k in range(pt.dim)): g for e, g in pt.guarantees.items()}
    return IwasawaPoly(pt.dim, pt.terms, coeffs, guars)


def iwasawa_flip(pt: IwasawaPoly, coords, p: int) -> IwasawaPoly:
    """Substitute T_k -> (1+T_k)^{-1} - 1 in the listed coordinates.

    ((1+T)^{-1} - 1)^j has T^i coefficient (-1)^i C(i-1, j-1), so the
    substitution is exact on a truncation (the substituted series has
    valuation 1).  This is the transform-side image of a coordinate sign
    flip, valid within the coefficient guarantees.
    """
    coords = set(coords)

    def col(i, j, flipped):
        if not flipped:
            return 1 if i == j else 0
        if i == j == 0:
            return 1
        if j == 0 or i < j:
            return 0
        return (-1) ** i * math.comb(i - 1, j - 1)

    coeffs, guars = {}, {}
    for e in itertools.product(range(pt.terms + 1), repeat=pt.dim):
        total = Fraction(0)
        guarantee = None
        for j in itertools.product(*(range(ek + 1) for ek in e)):
            factor = math.prod(col(ek, jk, k in coords) for k, (ek, jk) in enumerate(zip(e, j)))
            if not factor:
                continue
            total += factor * pt.coeffs.get(j, Fraction(0))
            g = pt.guarantees[j]
            guarantee = g if guarantee is None else min(guarantee, g)
        coeffs[e] = total
        guars[e] = guarantee if guarantee is not None else 0
    return IwasawaPoly(pt.dim, pt.terms, coeffs, guars)


def iwasawa_tensor(a: IwasawaPoly, b: IwasawaPoly) -> IwasawaPoly:
    """P(alpha . beta) = P(alpha)(T_1..) * P(beta)(..T_{i+j}) coefficientwise."""
    coeffs, guars = {}, {}
    terms = min(a.terms, b.terms)
    for e1, c1 in a.coeffs.items():
        for e2, c2 in b.coeffs.items():
            if max(e1 + e2, default=0) > terms:
                continue
            coeffs[e1 + e2] = c1 * c2
            guars[e1 + e2] = min(a.guarantees[e1], b.guarantees[e2])
    return IwasawaPoly(a.dim + b.dim, terms, coeffs, guars)


def measures_equal(mu: LevelFamily, nu: LevelFamily, up_to_level: int, mod_exp) -> bool:
    """True iff vp(mu - nu) >= mod_exp at every point of every level <= up_to_level.

    Pass mod_exp = INF for exact equality.
    """
    if mu.ctx != nu.ctx or mu.dim != nu.dim:
        raise ValueError("context/dimension mismatch")
    p = mu.ctx.p
    for n in range(up_to_level + 1):
        for a, v in mu.tables[n].items():
            if vp(v - nu.tables[n][a], p) < mod_exp:
                return False
    return True


# ---------------------------------------------------------------------------
# Exact finite Dirac combinations


@dataclass(frozen=True)
class DiracCombo:
    """sum_j c_j * delta_{v_j} with the points v_j kept as exact integers.

    Box integrals here are evaluated at the true points, so change-of-variable
    identities that are only congruences for level tables hold exactly.
    """

    dim: int
    atoms: tuple  # ((point tuple of Fractions, coeff), ...)

    @classmethod
    def make(cls, dim: int, atoms) -> "DiracCombo":
        packed = tuple((tuple(Fraction(x) for x in pt), Fraction(c)) for pt, c in atoms)
        for pt, _ in packed:
            if len(pt) != dim:
                raise ValueError("point dimension mismatch")
        return cls(dim, packed)

    def __add__(self, other: "DiracCombo") -> "DiracCombo":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return DiracCombo(self.dim, self.atoms + other.atoms)

    def scaled(self, c) -> "DiracCombo":
        c = Fraction(c)
        return DiracCombo(self.dim, tuple((pt, c * w) for pt, w in self.atoms))

    def pushforward_affine(self, coords) -> "DiracCombo":
        coords = [(int(e), Fraction(c)) for e, c in coords]
        atoms = tuple((tuple(e * x + c for x, (e, c) in zip(pt, coords)), w)
                      for pt, w in self.atoms)
        return DiracCombo(self.dim, atoms)

    def negated_points(self) -> "DiracCombo":
        return self.pushforward_affine([(-1, 0)] * self.dim)

    def box_integral_exact(self, base, level: int, poly: MPoly, p: int) -> Rat:
        """Exact integral of poly over base + p^level (Z_p)^dim."""
        pl = p ** level
        base = tuple(int(b) % pl for b in base)
        total = Fraction(0)
        for pt, w in self.atoms:
            if all(repr_mod(x, p, level) == b for x, b in zip(pt, base)):
                total += w * poly.evaluate(pt)
        return total

    def to_level_family(self, ctx: PrimeContext, n_max=None) -> LevelFamily:
        def fn(n, a):
            total = Fraction(0)
            for pt, w in self.atoms:
                if all(repr_mod(x, ctx.p, n) == b for x, b in zip(pt, a)):
                    total += w
            return total

        return LevelFamily.build(ctx, self.dim, fn, n_max)
