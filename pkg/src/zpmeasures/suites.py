"""Named verification suites with machine-readable reports.

Each suite runs a battery of identity checks on synthetic seeded data and
returns a SuiteReport.  Reports are deterministic for a fixed config and
seed.  The tamper flag injects one controlled fault per suite so the
failure path (exit code 1 plus a pinpoint) stays tested.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import classical, corrections, magnus, octagon
from .measures import (DiracCombo, LevelFamily, exterior_power, iwasawa_P,
                       iwasawa_flip, iwasawa_swap, iwasawa_tensor,
                       linear_combine, measures_equal, moment, scale_action,
                       signed_group, signed_perm_action, star_convolution,
                       transform_F, transform_F_via_P, validate_distribution)
from .padic import PrimeContext, bernoulli, binom, format_rat, vp

SUITES = ("octagon", "measures", "magnus", "transforms", "corrections", "all")


@dataclass
class RunConfig:
    p: int = 3
    n_max: int = 3
    degree: int = 3
    mod_exp: int = 3
    seed: int = 0
    suite: str = "all"
    fmt: str = "text"
    sigma_rep: int | None = None
    terms: int = 6
    tamper: bool = False

    def ctx(self) -> PrimeContext:
        return PrimeContext(self.p, self.n_max, self.mod_exp)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    config: dict
    checks: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self):
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def to_dict(self):
        out = {"suite": self.suite, "config": self.config,
               "passed": self.passed,
               "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                          for c in self.checks]}
        if self.artifacts:
            out["reports"] = self.artifacts
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"suite: {self.suite}"]
        lines.append("config: " + json.dumps(self.config, sort_keys=True))
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  {mark} {c.name}" + (f"  [{c.detail}]" if c.detail else ""))
        lines.append(("PASS" if self.passed else "FAIL") + f" {self.suite}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        rows = ["suite,check,passed,detail"]
        for c in self.checks:
            detail = c.detail.replace(",", ";")
            rows.append(f"{self.suite},{c.name},{int(c.passed)},{detail}")
        return "\n".join(rows)


def _seeded_units(rng: random.Random, p: int, count: int):
    units = []
    while len(units) < count:
        c = rng.randrange(2, 25 * p)
        if c % p:
            units.append(c)
    return units


def _random_dirac_combo(rng: random.Random, ctx: PrimeContext, dim: int,
                        atoms: int = 3) -> LevelFamily:
    parts, coeffs = [], []
    for _ in range(atoms):
        pt = [rng.randrange(0, ctx.p ** min(2, ctx.n_max)) for _ in range(dim)]
        parts.append(classical.make_dirac(pt, ctx))
        coeffs.append(rng.randrange(-3, 4))
    return linear_combine(coeffs, parts)


def _random_kernel_word(rng: random.Random, ctx: PrimeContext, level: int,
                        length: int = 6) -> magnus.FreeWord:
    gens = [magnus.X] + list(range(ctx.p ** level))
    letters = []
    for _ in range(length):
        letters.append((rng.choice(gens), rng.choice((1, -1))))
    bal = sum(e for g, e in letters if g == magnus.X)
    letters.extend([(magnus.X, -1 if bal > 0 else 1)] * abs(bal))
    word = magnus.FreeWord(ctx, level, tuple(letters)).reduced()
    if not word.letters:
        return magnus.commutator(magnus.FreeWord(ctx, level, ((magnus.X, 1),)),
                                 magnus.FreeWord(ctx, level, ((0, 1),)))
    return word


# ---------------------------------------------------------------------------


def measures_suite(cfg: RunConfig) -> SuiteReport:
    ctx = cfg.ctx()
    rng = random.Random(cfg.seed)
    rep = SuiteReport("measures", {"p": cfg.p, "n_max": cfg.n_max,
                                   "mod_exp": cfg.mod_exp, "seed": cfg.seed})

    named = {"dirac(2)": classical.make_dirac([2], ctx)}
    units = _seeded_units(rng, cfg.p, 5)
    for c in units[:2]:
        named[f"M({c})"] = classical.make_M(c, ctx)
        named[f"E1({c})"] = classical.make_E1(c, ctx)
        named[f"N2({c})"] = classical.make_N2(c, ctx)
    named[f"M({cfg.p * units[0]})"] = classical.make_M(cfg.p * units[0], ctx)

    d2_level = min(cfg.n_max, 2)
    d2ctx = PrimeContext(cfg.p, d2_level, cfg.mod_exp)
    word = magnus.commutator(magnus.FreeWord(d2ctx, d2_level, ((magnus.X, 1),)),
                             magnus.FreeWord(d2ctx, d2_level, ((0, 1),)))
    alphas, gammas = magnus.coefficient_tables(word)
    named["D2([x,y0])"] = classical.make_D2(alphas, gammas, d2ctx)

    if cfg.tamper:
        bad = classical.make_M(units[0], ctx)
        level = min(2, cfg.n_max)
        tables = list(bad.tables)
        t = dict(tables[level])
        t[(1,) * 1] = t[(1,)] + 1
        tables[level] = t
        named[f"M({units[0]})+tamper"] = LevelFamily(ctx, 1, tuple(tables), bad.denom_bound)

    for name, mu in named.items():
        res = validate_distribution(mu)
        detail = "" if res.passed else \
            f"level={res.level} point={res.point} defect={format_rat(res.defect)}"
        rep.add(f"distribution:{name}", res.passed, detail)

    for c in units:
        checks = classical.e1_relation_suite(c, ctx, cfg.n_max, cfg.mod_exp)
        for nm, ok, detail in checks:
            rep.add(f"e1-relations:{nm}:c={c}", ok, detail if not ok else "")

    if cfg.p >= 5:
        c = units[0]
        sym_level = min(cfg.n_max, 2)
        g = _random_dirac_combo(rng, ctx, 1)
        nu = linear_combine([1, 1], [g, scale_action(g, -1)])
        rho = linear_combine([1, Fraction(1 - c, 2)],
                             [classical.make_E1(c, ctx), classical.make_dirac([0], ctx)])
        alpha = linear_combine([1, Fraction(1, 2)], [nu, rho])
        beta2 = linear_combine([Fraction(1, 2)], [exterior_power(alpha, 2)])
        parts = [signed_perm_action(beta2, perm, eps) for perm, eps in signed_group(2)]
        lhs = linear_combine([1] * len(parts), parts)
        rhs = exterior_power(rho, 2)
        ok = measures_equal(lhs, rhs, sym_level, cfg.mod_exp)
        rep.add(f"signed-symmetrization:c={c}", ok,
                f"group sum vs square, level {sym_level} mod p^{cfg.mod_exp}")
    return rep


def transforms_suite(cfg: RunConfig) -> SuiteReport:
    ctx = cfg.ctx()
    rng = random.Random(cfg.seed)
    rep = SuiteReport("transforms", {"p": cfg.p, "n_max": cfg.n_max,
                                     "terms": cfg.terms, "seed": cfg.seed})
    terms = cfg.terms
    units = _seeded_units(rng, cfg.p, 3)

    for c in [units[0], -2, Fraction(1, 2)]:
        M = classical.make_M(c, ctx)
        P = iwasawa_P(M, terms, cfg.n_max)
        if cfg.tamper and c == units[0]:
            P.coeffs[(2,)] += 1
        bad = None
        for k in range(terms + 1):
            want = binom(c, k + 1) - (1 if k == 0 else 0)
            if vp(P.coefficient((k,)) - want, cfg.p) < P.guarantees[(k,)]:
                bad = k
                break
        rep.add(f"interpolation:M({format_rat(c)})", bad is None,
                "" if bad is None else f"coefficient k={bad} off")

    for c in units[:2]:
        E = classical.make_E1(c, ctx)
        bad = None
        for k in range(1, terms + 1):
            val, e = moment(E, (k - 1,), cfg.n_max)
            want = Fraction(bernoulli(k), k) * (1 - Fraction(c) ** k)
            if vp(val - want, cfg.p) < e:
                bad = k
                break
        rep.add(f"e1-moments:c={c}", bad is None,
                "" if bad is None else f"moment k={bad} off")

    mu = _random_dirac_combo(rng, ctx, 1)
    F1 = transform_F(mu, terms, cfg.n_max)
    F2 = transform_F_via_P(iwasawa_P(mu, terms, cfg.n_max), cfg.p)
    bad = None
    for k in range(terms + 1):
        e = min(F1.guarantees[(k,)], F2.guarantees[(k,)])
        if vp(F1.coefficient((k,)) - F2.coefficient((k,)), cfg.p) < e:
            bad = k
            break
    rep.add("exp-transform-two-routes", bad is None,
            "" if bad is None else f"coefficient k={bad} off")

    if cfg.p >= 5:
        c = units[0]
        lvl = min(cfg.n_max, 2)
        K = min(terms, 3)
        g = _random_dirac_combo(rng, ctx, 1)
        nu = linear_combine([1, 1], [g, scale_action(g, -1)])
        rho = linear_combine([1, Fraction(1 - c, 2)],
                             [classical.make_E1(c, ctx), classical.make_dirac([0], ctx)])
        alpha = linear_combine([1, Fraction(1, 2)], [nu, rho])
        beta2 = linear_combine([Fraction(1, 2)], [exterior_power(alpha, 2)])
        P2 = iwasawa_P(beta2, K, lvl)
        exps = list(itertools.product(range(K + 1), repeat=2))
        acc = {e: Fraction(0) for e in exps}
        guar = {e: None for e in exps}
        for perm, eps in signed_group(2):
            pt = iwasawa_swap(P2, perm)
            pt = iwasawa_flip(pt, {k for k in range(2) if eps[k] == -1}, cfg.p)
            sign = eps[0] * eps[1]
            for e in exps:
                acc[e] += sign * pt.coefficient(e)
                guar[e] = pt.guarantees[e] if guar[e] is None \
                    else min(guar[e], pt.guarantees[e])
        P1 = iwasawa_P(rho, K, lvl)
        rhs = iwasawa_tensor(P1, P1)
        bad = None
        for e in exps:
            bound = min(guar[e], rhs.guarantees[e])
            if vp(acc[e] - rhs.coefficient(e), cfg.p) < bound:
                bad = e
                break
        rep.add(f"symmetrized-transform:c={c}", bad is None,
                "" if bad is None else f"coefficient {bad} off")
    return rep


def magnus_suite(cfg: RunConfig) -> SuiteReport:
    ctx = cfg.ctx()
    rng = random.Random(cfg.seed)
    rep = SuiteReport("magnus", {"p": cfg.p, "n_max": cfg.n_max,
                                 "degree": cfg.degree, "seed": cfg.seed})
    level = cfg.n_max
    D = cfg.degree
    width0 = ctx.p  # level-1 alphabet size used for shuffle pairs
    words = [_random_kernel_word(rng, ctx, level) for _ in range(10)]

    for w_i, g in enumerate(words):
        s = magnus.embed_E(g, D)
        if cfg.tamper and w_i == 0:
            s.coeffs[(0, 0)] = s.coeff((0, 0)) + 1
        ok_pair = None
        ys = range(min(width0, ctx.p ** level))
        pairs = [((a,), (b,)) for a in ys for b in ys]
        pairs += [((a,), (b, c)) for a in ys for b in ys for c in ys if D >= 3]
        for u, v in pairs:
            if not magnus.shuffle_check(s, u, v):
                ok_pair = (u, v)
                break
        rep.add(f"shuffle:word{w_i}", ok_pair is None,
                "" if ok_pair is None else f"fails at {ok_pair}")
        rep.add(f"lie:word{w_i}", magnus.log_lie_check(s), "")

        for r in (1, 2):
            res = validate_distribution(magnus.beta_measures(g, r, ctx))
            rep.add(f"beta-distribution:word{w_i}:r={r}", res.passed,
                    "" if res.passed else f"level={res.level} point={res.point}")

    # negative control: a perturbed series must fail the shuffle relations
    bad = magnus.embed_E(words[0], D)
    bad.coeffs[(0, 0)] = bad.coeff((0, 0)) + 1
    failed = not magnus.shuffle_check(bad, (0,), (0,))
    rep.add("shuffle-negative-control", failed, "perturbed series must fail")

    g, h = words[0], words[1]
    A = magnus.graded_beta(g, ctx, 2)
    B = magnus.graded_beta(h, ctx, 2)
    C = magnus.graded_beta(g * h, ctx, 2)
    S = star_convolution(A, B)
    star_ok = all(S[i].tables == C[i].tables for i in range(3))
    rep.add("star-identity", star_ok, "graded product vs word product")

    b2 = magnus.beta_measures(g, 2, ctx)
    b1 = magnus.beta_measures(g, 1, ctx)
    perm_ok = True
    for a in itertools.product(range(ctx.p), repeat=2):
        lhs = b2.tables[1][a] + b2.tables[1][(a[1], a[0])]
        if lhs != b1.tables[1][(a[0],)] * b1.tables[1][(a[1],)]:
            perm_ok = False
            break
    rep.add("permutation-sum", perm_ok, "degree-2 symmetrization vs products")

    n_box = max(0, level - 1)
    shapes = [(n0, n1) for n0 in range(3) for n1 in range(3) if n0 + n1 <= 2]
    cong_ok, detail = True, ""
    for shape in shapes:
        for i in range(ctx.p ** n_box):
            r = magnus.word_coefficient_congruence(g, shape, (i,), n_box, 1)
            if not r["passed"]:
                cong_ok, detail = False, f"shape={shape} i={i}"
                break
    rep.add("coefficient-congruence", cong_ok, detail)
    return rep


def octagon_suite(cfg: RunConfig) -> SuiteReport:
    rep = SuiteReport("octagon", {"p": cfg.p, "n": cfg.n_max,
                                  "sigma_rep": cfg.sigma_rep})
    width = cfg.p ** cfg.n_max
    if cfg.sigma_rep is not None:
        reps = [cfg.sigma_rep]
    else:
        reps = [s for s in range(1, width) if s % cfg.p]
    for s in reps:
        prod = octagon.octagon_product(cfg.p, cfg.n_max, s)
        if cfg.tamper:
            prod.add_term((0, 0), octagon.SymPoly.const(1))
        rep.add(f"x-coefficient:s={s}", prod.coeff((magnus.X,)).is_zero(), "")
        d1 = octagon.deg1_implied_by_reflection(cfg.p, cfg.n_max, s)
        rep.add(f"deg1-from-reflection:s={s}", d1["passed"], "")
        res = octagon.degree2_symmetry_check(cfg.p, cfg.n_max, s)
        if cfg.tamper:
            rs = octagon.standard_relation_set(cfg.p, cfg.n_max, s, prod)
            bad = {}
            for a, b in itertools.product(range(width), repeat=2):
                r = rs.reduce(octagon.degree2_display(a, b, cfg.p, cfg.n_max, s)
                              - prod.coeff((a, b)))
                if not r.is_zero():
                    bad[(a, b)] = str(r)
            rep.add(f"degree2-residuals:s={s}", not bad,
                    f"nonzero at {sorted(bad)[:3]}" if bad else "")
        else:
            nonzero = [k for k, v in res["residuals"].items() if not v.is_zero()]
            rep.add(f"degree2-residuals:s={s}", res["passed"],
                    f"nonzero at {nonzero[:3]}" if nonzero else
                    f"extra_relations={res['extra_relations_used']}")
            rep.artifacts.append(octagon.report_json_dict(res))
        for name in "CEG":
            d = octagon.derive_factor_by_subst(name, cfg.p, cfg.n_max, s)
            rep.add(f"substitution-derivation:{name}:s={s}", d["passed"],
                    "" if d["passed"] else str(sorted(d["mismatches"].items())[:2]))
    return rep


def corrections_suite(cfg: RunConfig) -> SuiteReport:
    rng = random.Random(cfg.seed)
    rep = SuiteReport("corrections", {"p": cfg.p, "n": 1, "r": 2, "seed": cfg.seed})
    p, n, r = cfg.p, 1, 2
    shapes = [s for s in itertools.product(range(3), repeat=3) if sum(s) <= 2]

    def random_combo(dim, natoms=4):
        atoms = [(tuple(rng.randrange(-6, 7) for _ in range(dim)),
                  Fraction(rng.randrange(-3, 4))) for _ in range(natoms)]
        return DiracCombo.make(dim, atoms)

    bases = list(itertools.product(range(p ** n), repeat=r))
    for trial in range(10):
        beta = random_combo(r)
        lhs_beta = beta
        if cfg.tamper and trial == 0:
            # perturb one atom on the left-hand side only
            (pt0, c0), rest = beta.atoms[0], beta.atoms[1:]
            lhs_beta = DiracCombo(r, ((pt0, c0 + 1),) + rest)
        bad = None
        for shape in shapes:
            for base in bases:
                l, _ = corrections.sign_change_identity(lhs_beta, base, shape, p, n)
                _, rr = corrections.sign_change_identity(beta, base, shape, p, n)
                checksum = [("sign", l == rr)]
                l, rr = corrections.reflect_shift_identity(beta, base, shape, p, n)
                checksum.append(("reflect", l == rr))
                l, rr = corrections.shift_identity(beta, base, shape, p, n)
                checksum.append(("shift", l == rr))
                for tag, ok in checksum:
                    if not ok:
                        bad = f"{tag} shape={shape} base={base}"
                        break
                if bad:
                    break
            if bad:
                break
        rep.add(f"change-of-variables:trial{trial}", bad is None, bad or "")

    for trial in range(5):
        g = random_combo(r)
        beta = g + g.negated_points()
        bad = None
        for shape in shapes:
            for base in [(0, 1), (1, 2), (2, 2)]:
                s = corrections.four_term_sum(beta, base, shape, p, n)
                if s != 0:
                    bad = f"shape={shape} base={base} sum={format_rat(s)}"
                    break
            if bad:
                break
        rep.add(f"four-term-sum:trial{trial}", bad is None, bad or "")
    return rep


SUITE_RUNNERS = {
    "measures": measures_suite,
    "transforms": transforms_suite,
    "magnus": magnus_suite,
    "octagon": octagon_suite,
    "corrections": corrections_suite,
}


def run_suite(cfg: RunConfig):
    """Run one suite (or all); returns a list of SuiteReport."""
    if cfg.suite == "all":
        return [SUITE_RUNNERS[name](cfg) for name in
                ("measures", "transforms", "magnus", "octagon", "corrections")]
    return [SUITE_RUNNERS[cfg.suite](cfg)]
