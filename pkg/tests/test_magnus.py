import itertools
import math
import random
from fractions import Fraction

import pytest

from zpmeasures.classical import make_dirac
from zpmeasures.magnus import (FreeWord, NcSeries, WordSyntaxError, X,
                               beta_measures, commutator, embed_E,
                               exp_transform_roundtrip, graded_beta,
                               kernel_check, log_lie_check, parse_word,
                               project_pr, project_word, series_log,
                               shuffle_check, shuffle_words, specialize_E0,
                               word_coefficient_congruence)
from zpmeasures.measures import star_convolution, validate_distribution
from zpmeasures.padic import PrimeContext, vp

CTX2 = PrimeContext(2, 2)
CTX3 = PrimeContext(3, 2)


def random_kernel_word(ctx, level, rng, length=6):
    gens = [X] + list(range(ctx.p ** level))
    letters = [(rng.choice(gens), rng.choice((1, -1))) for _ in range(length)]
    bal = sum(e for g, e in letters if g == X)
    letters += [(X, -1 if bal > 0 else 1)] * abs(bal)
    w = FreeWord(ctx, level, tuple(letters)).reduced()
    return w if w.letters else FreeWord(ctx, level, ((0, 1), (1, 1)))


def test_word_parsing():
    w = parse_word("[y0,y1]", CTX3, 1)
    assert w.letters == ((0, 1), (1, 1), (0, -1), (1, -1))
    w = parse_word("y0^3 x y1 x^-1", CTX3, 1)
    assert w.letters == ((0, 1),) * 3 + ((X, 1), (1, 1), (X, -1))
    assert parse_word("y0 * y1", CTX3, 1).letters == ((0, 1), (1, 1))
    with pytest.raises(WordSyntaxError):
        parse_word("w0", CTX3, 1)
    with pytest.raises(ValueError):
        parse_word("y7", CTX3, 1)


def test_free_reduction_and_kernel():
    w = parse_word("x y0 y0^-1 x^-1 y1", CTX3, 1)
    assert w.reduced().letters == ((1, 1),)
    assert kernel_check(parse_word("[x,y0]", CTX3, 1))
    assert not kernel_check(parse_word("x", CTX3, 1))
    assert kernel_check(parse_word("y0^3 x y1 x^-1", CTX3, 1))


def test_embedding_single_generator():
    E = embed_E(parse_word("y0", CTX3, 1), 3)
    assert E.coeff(()) == 1
    assert E.coeff((0,)) == 1
    assert E.coeff((0, 0)) == Fraction(1, 2)
    assert E.coeff((0, 0, 0)) == Fraction(1, 6)
    assert embed_E(parse_word("y0 y0^-1", CTX3, 1), 3).coeffs == {(): Fraction(1)}


def test_embedding_commutator():
    E = embed_E(parse_word("[y0,y1]", CTX3, 1), 3)
    assert E.coeff((0,)) == 0 and E.coeff((1,)) == 0
    assert E.coeff((0, 1)) == 1 and E.coeff((1, 0)) == -1


def test_embedding_is_multiplicative():
    rng = random.Random(11)
    for _ in range(3):
        a = random_kernel_word(CTX3, 1, rng)
        b = random_kernel_word(CTX3, 1, rng)
        assert (embed_E(a, 3) * embed_E(b, 3)).coeffs == embed_E(a * b, 3).coeffs


def test_specialization_drops_x():
    assert specialize_E0(embed_E(parse_word("x", CTX3, 1), 3)).coeffs == {(): Fraction(1)}
    s = specialize_E0(embed_E(parse_word("[x,y0]", CTX3, 1), 3))
    assert all(X not in m for m in s.coeffs)
    assert all(len(m) != 1 for m in s.coeffs if m)


def test_kernel_word_x_coefficient_antisymmetry():
    rng = random.Random(4)
    for _ in range(4):
        g = random_kernel_word(CTX3, 1, rng)
        E = embed_E(g, 2)
        assert E.coeff((X,)) == 0
        for i in range(3):
            assert E.coeff((X, i)) + E.coeff((i, X)) == 0


def test_log_and_lie_criterion():
    assert series_log(embed_E(parse_word("y0", CTX3, 1), 3)).coeff((0,)) == 1
    assert log_lie_check(embed_E(parse_word("y0", CTX3, 1), 3))
    assert log_lie_check(embed_E(parse_word("[y0,y1]", CTX3, 1), 3))
    bad = NcSeries(CTX3, 1, 3, {(): Fraction(1), (0, 1): Fraction(1)})
    assert not log_lie_check(bad)


def test_shuffle_relations():
    s = embed_E(parse_word("y0", CTX3, 1), 3)
    assert shuffle_check(s, (0,), (0,))
    s2 = embed_E(parse_word("[y0,y1] y0 y1", CTX3, 1), 3)
    assert shuffle_check(s2, (0,), (1,))
    bad = NcSeries(CTX3, 1, 3, {(): Fraction(1), (0, 1): Fraction(1)})
    assert not shuffle_check(bad, (0,), (1,))
    assert sum(shuffle_words((0,), (0, 1)).values()) == 3


def test_gamma_of_x_y_commutator():
    E = embed_E(parse_word("[x,y0]", CTX3, 1), 3)
    assert E.coeff((X, 0)) == 1
    assert E.coeff((0, X)) == -1


def test_projection_on_words():
    assert project_word(FreeWord(CTX2, 2, ((0, 1),)), 1).letters == ((0, 1),)
    x1 = FreeWord(CTX3, 1, ((X, 1),))
    assert project_word(x1, 0).letters == ((X, 1),) * 3
    y3 = FreeWord(CTX2, 2, ((3, 1),))
    assert project_word(y3, 1).letters == ((X, -1), (1, 1), (X, 1))


def test_projection_commutes_with_embedding():
    w = FreeWord(CTX2, 2, ((2, 1),)) * commutator(
        FreeWord(CTX2, 2, ((X, 1),)), FreeWord(CTX2, 2, ((1, 1),)))
    rng = random.Random(17)
    words = [w] + [random_kernel_word(CTX2, 2, rng, length=4) for _ in range(2)]
    for word in words:
        for n in (0, 1):
            assert project_pr(embed_E(word, 3), n).coeffs == \
                embed_E(project_pr(word, n), 3).coeffs


def test_beta_measures_dirac_case():
    g = FreeWord(CTX2, 2, ((0, 1),))
    assert beta_measures(g, 1, CTX2).tables == make_dirac([0], CTX2).tables
    b0 = beta_measures(g, 0, CTX2)
    assert b0.dim == 0 and b0.tables[0][()] == 1
    with pytest.raises(ValueError):
        beta_measures(FreeWord(CTX2, 2, ((X, 1),)), 1, CTX2)


def test_beta_measures_distribution_and_denominators():
    rng = random.Random(21)
    for _ in range(4):
        g = random_kernel_word(CTX2, 2, rng)
        for r in (1, 2, 3):
            br = beta_measures(g, r, CTX2)
            assert validate_distribution(br).passed
            assert br.denom_bound <= vp(math.factorial(r), 2)


def test_graded_star_identity():
    rng = random.Random(31)
    for _ in range(3):
        g = random_kernel_word(CTX2, 2, rng)
        h = random_kernel_word(CTX2, 2, rng)
        S = star_convolution(graded_beta(g, CTX2, 2), graded_beta(h, CTX2, 2))
        C = graded_beta(g * h, CTX2, 2)
        for i in range(3):
            assert S[i].tables == C[i].tables


def test_permutation_sum_gives_products():
    rng = random.Random(41)
    g = random_kernel_word(CTX2, 2, rng)
    b1 = beta_measures(g, 1, CTX2)
    b2 = beta_measures(g, 2, CTX2)
    for n in range(3):
        for a in itertools.product(range(2 ** n), repeat=2):
            lhs = b2.tables[n][a] + b2.tables[n][(a[1], a[0])]
            assert lhs == b1.tables[n][(a[0],)] * b1.tables[n][(a[1],)]


def test_word_coefficient_congruence():
    ctx = PrimeContext(3, 3)
    g = commutator(FreeWord(ctx, 3, ((X, 1),)), FreeWord(ctx, 3, ((0, 1),)))
    rep = word_coefficient_congruence(g, (1, 0), (0,), 1, 2)
    assert rep["passed"] and rep["achieved"] >= rep["guaranteed"]
    # all-zero X-blocks: the identity is definitional
    rep0 = word_coefficient_congruence(g, (0, 0), (1,), 1, 2)
    assert rep0["passed"]
    # larger m tightens the guaranteed congruence
    r1 = word_coefficient_congruence(g, (1, 0), (0,), 1, 1)
    r2 = word_coefficient_congruence(g, (1, 0), (0,), 1, 2)
    assert r2["guaranteed"] > r1["guaranteed"]


def test_exp_transform_roundtrip():
    g = commutator(FreeWord(CTX2, 2, ((0, 1),)), FreeWord(CTX2, 2, ((1, 1),)))
    _, _, ok = exp_transform_roundtrip(g, 2, 3)
    assert all(ok.values())
    g2 = FreeWord(CTX2, 2, ((0, 1), (1, 1)))
    _, _, ok = exp_transform_roundtrip(g2, 1, 4)
    assert all(ok.values())
    _, _, ok = exp_transform_roundtrip(FreeWord(CTX2, 2, ((0, 1),)), 1, 3)
    assert all(ok.values())


def test_series_json_shape():
    d = embed_E(parse_word("[y0,y1]", CTX3, 1), 2).to_json_dict()
    assert set(d) == {"level", "degree", "terms"}
    monos = {row["mono"] for row in d["terms"]}
    assert "1" in monos and "Y0.Y1" in monos
