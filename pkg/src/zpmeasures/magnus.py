"""Free pro-p words, their exponential embedding, and derived measures.

A level-n word is spelled in generators x, y_0, ..., y_{p^n - 1}.  The
embedding sends each generator to the exponential of a non-commuting
variable; coefficients of the image series, collected across levels via the
covering projections, are exactly the level tables of measures on (Z_p)^r.

Generators are encoded as ints: -1 is X, i >= 0 is Y_i.  Monomials are
tuples of generator ids.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .measures import LevelFamily, box_integral, transform_F
from .mpoly import MPoly
from .padic import PrimeContext, Rat, format_rat, vp

X = -1


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class FreeWord:
    """A word in the level-n generators; letters are (generator, +-1) pairs."""

    ctx: PrimeContext
    level: int
    letters: tuple

    def __post_init__(self):
        width = self.ctx.p ** self.level
        for g, e in self.letters:
            if not (g == X or 0 <= g < width):
                raise ValueError(f"generator {g} out of range at level {self.level}")
            if e not in (1, -1):
                raise ValueError("letter exponents must be +-1")

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if (self.ctx, self.level) != (other.ctx, other.level):
            raise ValueError("level mismatch")
        return FreeWord(self.ctx, self.level, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.ctx, self.level,
                        tuple((g, -e) for g, e in reversed(self.letters)))

    def reduced(self) -> "FreeWord":
        """Freely reduce: cancel adjacent inverse pairs."""
        out = []
        for letter in self.letters:
            if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
                out.pop()
            else:
                out.append(letter)
        return FreeWord(self.ctx, self.level, tuple(out))

    def x_exponent(self) -> int:
        return sum(e for g, e in self.letters if g == X)


def kernel_check(w: FreeWord) -> bool:
    """True iff the total x-exponent vanishes (the word survives every level)."""
    return w.x_exponent() == 0


def commutator(a: FreeWord, b: FreeWord) -> FreeWord:
    return a * b * a.inverse() * b.inverse()


_TOKEN = re.compile(r"\s*(y\d+|x|\[|\]|,|\*|\^-?\d+)")


def parse_word(text: str, ctx: PrimeContext, level: int) -> FreeWord:
    """Word grammar: generators x, y0..y{p^n-1}; ^-1 (or ^k) powers;
    [a,b] commutator sugar; concatenation by '*' or whitespace."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise WordSyntaxError(f"bad token at: {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)  # sentinel

    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def parse_seq(stop) -> FreeWord:
        word = FreeWord(ctx, level, ())
        while peek() is not None and peek() not in stop:
            if peek() == "*":
                take()
                continue
            word = word * parse_item()
        return word

    def parse_item() -> FreeWord:
        tok = take()
        if tok == "[":
            a = parse_seq({","})
            if take() != ",":
                raise WordSyntaxError("expected ',' in commutator")
            b = parse_seq({"]"})
            if take() != "]":
                raise WordSyntaxError("expected ']'")
            item = commutator(a, b)
        elif tok == "x":
            item = FreeWord(ctx, level, ((X, 1),))
        elif tok and tok.startswith("y"):
            item = FreeWord(ctx, level, ((int(tok[1:]), 1),))
        else:
            raise WordSyntaxError(f"unexpected token {tok!r}")
        if peek() and peek().startswith("^"):
            k = int(take()[1:])
            if k == 0:
                item = FreeWord(ctx, level, ())
            else:
                base = item if k > 0 else item.inverse()
                item = FreeWord(ctx, level, base.letters * abs(k))
        return item

    word = parse_seq(set())
    if not word.letters:
        raise WordSyntaxError("empty word")
    return word


# ---------------------------------------------------------------------------
# Truncated non-commutative power series


@dataclass
class NcSeries:
    """Power series in X, Y_0..Y_{p^level - 1} truncated past `degree`."""

    ctx: PrimeContext
    level: int
    degree: int
    coeffs: dict  # monomial tuple -> Fraction

    @classmethod
    def one(cls, ctx, level, degree) -> "NcSeries":
        return cls(ctx, level, degree, {(): Fraction(1)})

    def coeff(self, mono) -> Rat:
        return self.coeffs.get(tuple(mono), Fraction(0))

    def _same_shape(self, other):
        return (self.ctx, self.level, self.degree) == (other.ctx, other.level, other.degree)

    def __add__(self, other: "NcSeries") -> "NcSeries":
        assert self._same_shape(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return NcSeries(self.ctx, self.level, self.degree, out)

    def __sub__(self, other: "NcSeries") -> "NcSeries":
        return self + other.scaled(-1)

    def scaled(self, c) -> "NcSeries":
        c = Fraction(c)
        if not c:
            return NcSeries(self.ctx, self.level, self.degree, {})
        return NcSeries(self.ctx, self.level, self.degree,
                        {m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, other: "NcSeries") -> "NcSeries":
        assert self._same_shape(other)
        out = {}
        for m1, c1 in self.coeffs.items():
            room = self.degree - len(m1)
            for m2, c2 in other.coeffs.items():
                if len(m2) > room:
                    continue
                m = m1 + m2
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return NcSeries(self.ctx, self.level, self.degree, out)

    def homogeneous(self, d: int) -> dict:
        return {m: c for m, c in self.coeffs.items() if len(m) == d}

    def to_json_dict(self):
        def mono_name(m):
            return ".".join("X" if g == X else f"Y{g}" for g in m) or "1"

        return {"level": self.level, "degree": self.degree,
                "terms": [{"mono": mono_name(m), "value": format_rat(self.coeffs[m])}
                          for m in sorted(self.coeffs, key=lambda m: (len(m), m))]}


def exp_gen(ctx, level, degree, gen: int, sign: int) -> NcSeries:
    coeffs = {}
    for k in range(degree + 1):
        coeffs[(gen,) * k] = Fraction(sign ** k, math.factorial(k))
    return NcSeries(ctx, level, degree, coeffs)


def embed_E(w: FreeWord, degree: int) -> NcSeries:
    """Product over the letters of exp(+-generator), truncated."""
    out = NcSeries.one(w.ctx, w.level, degree)
    for g, e in w.letters:
        out = out * exp_gen(w.ctx, w.level, degree, g, e)
    return out


def specialize_E0(s: NcSeries) -> NcSeries:
    """Set X to zero: drop every monomial containing X."""
    return NcSeries(s.ctx, s.level, s.degree,
                    {m: c for m, c in s.coeffs.items() if X not in m})


def series_log(s: NcSeries) -> NcSeries:
    """log of a series with constant term 1, truncated at the series degree."""
    if s.coeff(()) != 1:
        raise ValueError("log needs constant term 1")
    u = s - NcSeries.one(s.ctx, s.level, s.degree)
    out = NcSeries(s.ctx, s.level, s.degree, {})
    power = NcSeries.one(s.ctx, s.level, s.degree)
    for k in range(1, s.degree + 1):
        power = power * u
        out = out + power.scaled(Fraction((-1) ** (k + 1), k))
    return out


def _left_bracketing(mono: tuple) -> dict:
    """Dynkin map on one monomial: w = g1..gd -> [[g1,g2],...,gd]."""
    out = {mono[:1]: Fraction(1)}
    for g in mono[1:]:
        nxt = {}
        for m, c in out.items():
            for mm, cc in ((m + (g,), c), ((g,) + m, -c)):
                s = nxt.get(mm, Fraction(0)) + cc
                if s:
                    nxt[mm] = s
                else:
                    nxt.pop(mm, None)
        out = nxt
    return out


def log_lie_check(s: NcSeries) -> bool:
    """True iff log(s) is a Lie series degree by degree.

    Uses the Dynkin-Specht-Wever criterion: a homogeneous element L of
    degree d is Lie iff left-bracketing maps it to d * L.
    """
    logs = series_log(s)
    for d in range(1, s.degree + 1):
        comp = logs.homogeneous(d)
        image = {}
        for m, c in comp.items():
            for mm, cc in _left_bracketing(m).items():
                t = image.get(mm, Fraction(0)) + c * cc
                if t:
                    image[mm] = t
                else:
                    image.pop(mm, None)
        want = {m: d * c for m, c in comp.items()}
        if image != want:
            return False
    return True


def shuffle_words(u: tuple, v: tuple) -> dict:
    """All interleavings of u and v with multiplicities."""
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out = {}
    for w, c in shuffle_words(u[1:], v).items():
        m = (u[0],) + w
        out[m] = out.get(m, 0) + c
    for w, c in shuffle_words(u, v[1:]).items():
        m = (v[0],) + w
        out[m] = out.get(m, 0) + c
    return out


def shuffle_check(s: NcSeries, u, v) -> bool:
    """<s,u><s,v> == sum of <s,w> over shuffles w of u and v."""
    u, v = tuple(u), tuple(v)
    if X in u or X in v:
        raise ValueError("shuffle arguments must be X-free")
    if len(u) + len(v) > s.degree:
        raise ValueError("total degree exceeds the truncation")
    total = sum((c * s.coeff(w) for w, c in shuffle_words(u, v).items()), Fraction(0))
    return s.coeff(u) * s.coeff(v) == total


# ---------------------------------------------------------------------------
# Level projections


def project_word(w: FreeWord, n: int) -> FreeWord:
    """Push a level n+m word down to level n: x -> x^{p^m},
    y_{i + k p^n} -> x^{-k} y_i x^{k}."""
    if n > w.level:
        raise ValueError("can only project downward")
    p, pn = w.ctx.p, w.ctx.p ** n
    pm = w.ctx.p ** (w.level - n)
    letters = []
    for g, e in w.letters:
        if g == X:
            letters.extend([(X, e)] * pm)
        else:
            i, k = g % pn, g // pn
            letters.extend([(X, -1)] * k)
            letters.append((i, e))
            letters.extend([(X, 1)] * k)
    return FreeWord(w.ctx, n, tuple(letters))


def _exp_scalar_x(ctx, n, degree, k: int) -> NcSeries:
    """exp(k X) as a level-n series, k an integer."""
    coeffs = {(X,) * j: Fraction(k ** j, math.factorial(j)) for j in range(degree + 1)}
    return NcSeries(ctx, n, degree, coeffs)


def project_series(s: NcSeries, n: int) -> NcSeries:
    """Generator substitution X -> p^m X, Y_{i+k p^n} -> exp(-kX) Y_i exp(kX)."""
    if n > s.level:
        raise ValueError("can only project downward")
    ctx = s.ctx
    pn = ctx.p ** n
    pm = ctx.p ** (s.level - n)
    images = {X: NcSeries(ctx, n, s.degree, {(X,): Fraction(pm)})}
    for g in range(ctx.p ** s.level):
        i, k = g % pn, g // pn
        images[g] = _exp_scalar_x(ctx, n, s.degree, -k) \
            * NcSeries(ctx, n, s.degree, {(i,): Fraction(1)}) \
            * _exp_scalar_x(ctx, n, s.degree, k)
    out = NcSeries(ctx, n, s.degree, {})
    for mono, c in s.coeffs.items():
        term = NcSeries.one(ctx, n, s.degree).scaled(c)
        for g in mono:
            term = term * images[g]
        out = out + term
    return out


def project_pr(obj, n: int):
    """Project a word or a series at level n+m down to level n."""
    if isinstance(obj, FreeWord):
        return project_word(obj, n)
    if isinstance(obj, NcSeries):
        return project_series(obj, n)
    raise TypeError("expected FreeWord or NcSeries")


# ---------------------------------------------------------------------------
# Coefficient views and measures


def alpha_coeff(s: NcSeries, i: int) -> Rat:
    return s.coeff((i,))


def beta_coeff(s: NcSeries, a: int, b: int) -> Rat:
    return s.coeff((a, b))


def gamma_coeff(s: NcSeries, i: int) -> Rat:
    return s.coeff((X, i))


def embed_at_level(g: FreeWord, n: int, degree: int) -> NcSeries:
    return embed_E(project_word(g, n), degree)


def coefficient_tables(g: FreeWord, degree: int = 2):
    """Per-level alpha and gamma tables of a kernel word (for the D2 measure)."""
    alphas, gammas = [], []
    for n in range(g.level + 1):
        s = embed_at_level(g, n, degree)
        width = g.ctx.p ** n
        alphas.append([alpha_coeff(s, i) for i in range(width)])
        gammas.append([gamma_coeff(s, i) for i in range(width)])
    return alphas, gammas


def beta_measures(g: FreeWord, r: int, ctx: PrimeContext) -> LevelFamily:
    """The dimension-r measure read off the X-free coefficients of the word."""
    if not kernel_check(g):
        raise ValueError("word is not in the kernel (nonzero x-exponent)")
    if r == 0:
        return LevelFamily.build(ctx, 0, lambda n, a: 1, g.level)
    tables = []
    for n in range(g.level + 1):
        s = specialize_E0(embed_at_level(g, n, r))
        tables.append(s)

    def fn(n, a):
        return tables[n].coeff(a)

    return LevelFamily.build(ctx, r, fn, g.level)


def graded_beta(g: FreeWord, ctx: PrimeContext, top: int):
    from .measures import GradedSequence

    return GradedSequence(tuple(beta_measures(g, r, ctx) for r in range(top + 1)))


def word_coefficient_congruence(g: FreeWord, ns, idx, n: int, m: int):
    """Compare a series coefficient with its box-integral expression.

    ns = (n_0, ..., n_r) are the X-block sizes, idx = (i_1, ..., i_r) the
    Y indices of the monomial X^{n_0} Y_{i_1} X^{n_1} ... Y_{i_r} X^{n_r}
    at level n.  Returns a dict with the coefficient, the Riemann sum at
    level n + m, the guaranteed exponent and the achieved exponent.
    """
    r = len(idx)
    if len(ns) != r + 1:
        raise ValueError("need r+1 X-block sizes for r Y-letters")
    p, pn = g.ctx.p, g.ctx.p ** n
    degree = r + sum(ns)
    series = embed_at_level(g, n, degree)
    mono = (X,) * ns[0]
    for ik, nk in zip(idx, ns[1:]):
        mono += (ik,) + (X,) * nk
    lam = series.coeff(mono)

    beta_r = beta_measures(g, r, g.ctx)
    poly = MPoly.const(r, Fraction(1, math.prod(math.factorial(k) for k in ns)))
    first = (MPoly.const(r, idx[0]) - MPoly.var(r, 0)) * Fraction(1, pn)
    poly = poly * first ** ns[0]
    for k in range(1, r):
        diff = (MPoly.var(r, k - 1) - MPoly.var(r, k)
                - idx[k - 1] + idx[k]) * Fraction(1, pn)
        poly = poly * diff ** ns[k]
    last = (MPoly.var(r, r - 1) - MPoly.const(r, idx[r - 1])) * Fraction(1, pn)
    poly = poly * last ** ns[r]

    value, guaranteed = box_integral(beta_r, idx, n, poly, n + m)
    achieved = vp(lam - value, p)
    return {"coefficient": lam, "riemann_sum": value,
            "guaranteed": guaranteed, "achieved": achieved,
            "passed": achieved >= guaranteed}


def exp_transform_roundtrip(g: FreeWord, r: int, terms: int):
    """Build the exponential transform of the dimension-r measure two ways.

    Route A evaluates moments of the level tables.  Route B rebuilds the same
    series from the level-0 coefficients of the word, summing
    lambda_w * prod_k (-(X_{k+1} + ... + X_r))^{n_k} over X-block shapes.
    Returns (route_a, route_b, per-coefficient ok) with comparisons made
    within route A's congruence guarantees.
    """
    ctx = g.ctx
    beta_r = beta_measures(g, r, ctx)
    route_a = transform_F(beta_r, terms, g.level)

    s0 = embed_at_level(g, 0, r + terms)
    total = MPoly(r)
    for shape in itertools.product(range(terms + 1), repeat=r):
        if sum(shape) > terms:
            continue
        mono = ()
        for nk in shape:
            mono += (X,) * nk + (0,)
        lam = s0.coeff(mono)
        if not lam:
            continue
        term = MPoly.const(r, lam)
        for k, nk in enumerate(shape):
            tail = MPoly(r)
            for i in range(k, r):
                tail = tail + MPoly.var(r, i)
            term = term * (-tail) ** nk
        total = total + term

    ok = {}
    for j in itertools.product(range(terms + 1), repeat=r):
        if sum(j) > terms:
            continue
        diff = route_a.coefficient(j) - total.coeffs.get(j, Fraction(0))
        ok[j] = vp(diff, ctx.p) >= route_a.guarantees[j]
    return route_a, total, ok
