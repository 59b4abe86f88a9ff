import random
from fractions import Fraction

import pytest

from zpmeasures.classical import (e1_relation_suite, inversion_defect,
                                  inversion_defect_linear, make_D2, make_E1,
                                  make_M, make_N2, make_dirac)
from zpmeasures.magnus import FreeWord, X, coefficient_tables, commutator
from zpmeasures.measures import linear_combine, scale_action, validate_distribution
from zpmeasures.padic import PrimeContext

CTX = PrimeContext(3, 3)


def test_dirac_tables_are_indicators():
    d = make_dirac([2], CTX)
    for n, table in enumerate(d.tables):
        for a, v in table.items():
            assert v in (0, 1)
            assert (v == 1) == (a[0] == 2 % 3 ** n)
    assert validate_distribution(d).passed


def test_interpolation_measure_tables():
    M = make_M(-1, PrimeContext(3, 1))
    assert [M.value(1, (i,)) for i in range(3)] == [-1, 0, -1]
    assert make_M(1, CTX).is_zero()
    for c in (7, -2, Fraction(1, 2), 3, 9, 0):
        M = make_M(c, CTX)
        assert validate_distribution(M).passed
        assert M.total_mass() == Fraction(c) - 1


def test_mazur_measure_basics():
    for c in (7, -2, Fraction(1, 2)):
        E = make_E1(c, CTX)
        assert validate_distribution(E).passed
        assert E.total_mass() == (Fraction(c) - 1) / 2
        # reflection relation holds exactly at every level
        rel = linear_combine([1, 1, -(Fraction(c) - 1)],
                             [E, scale_action(E, -1), make_dirac([0], CTX)])
        assert rel.is_zero()
    assert make_E1(1, CTX).is_zero()
    with pytest.raises(ValueError):
        make_E1(3, CTX)


def test_two_variable_companion():
    for c in (7, -2, Fraction(1, 2)):
        N = make_N2(c, CTX)
        assert validate_distribution(N).passed
        for n in range(N.n_max + 1):
            for (a, b), v in N.tables[n].items():
                assert N.tables[n][(b, a)] == -v
    assert make_N2(1, CTX).is_zero()


def test_dilog_measure_from_word():
    ctx = PrimeContext(3, 2)
    word = commutator(FreeWord(ctx, 2, ((X, 1),)), FreeWord(ctx, 2, ((0, 1),)))
    alphas, gammas = coefficient_tables(word)
    D2 = make_D2(alphas, gammas, ctx)
    assert validate_distribution(D2).passed
    for n in range(D2.n_max + 1):
        width = 3 ** n
        for (a, b), v in D2.tables[n].items():
            assert D2.tables[n][(b, a)] == -v
            if a == b:
                assert v == gammas[n][(-b) % width] - gammas[n][(-a) % width]


def test_dilog_measure_rejects_bad_tables():
    # corrupt one dilogarithm entry of otherwise-consistent tables: the
    # twisted compatibility breaks and the distribution check reports it
    ctx = PrimeContext(3, 2)
    word = commutator(FreeWord(ctx, 2, ((X, 1),)), FreeWord(ctx, 2, ((0, 1),)))
    alphas, gammas = coefficient_tables(word)
    gammas[2][4] += 1
    D2 = make_D2(alphas, gammas, ctx)
    assert not validate_distribution(D2).passed


def test_e1_relation_suite_passes():
    rng = random.Random(3)
    for p in (3, 5):
        ctx = PrimeContext(p, 3)
        cs = []
        while len(cs) < 5:
            c = rng.randrange(2, 40)
            if c % p:
                cs.append(c)
        cs.append(-2)
        for c in cs:
            checks = e1_relation_suite(c, ctx, 3, 3)
            assert all(ok for _, ok, _ in checks), (p, c, checks)


def test_e1_relation_suite_degenerate():
    checks = e1_relation_suite(1, CTX, 3, 3)
    assert all(ok for _, ok, _ in checks)


def test_inversion_defect_affine_in_measure():
    b1 = linear_combine([1, 2], [make_dirac([1], CTX), make_dirac([2], CTX)])
    b2 = linear_combine([1], [make_dirac([4], CTX)])
    mix = linear_combine([2, -1], [b1, b2])
    assert inversion_defect(mix, 7, 1, 2, 1, 2) == \
        2 * inversion_defect(b1, 7, 1, 2, 1, 2) - inversion_defect(b2, 7, 1, 2, 1, 2)


def test_inversion_defect_linear_specialization():
    b1 = linear_combine([1, 2], [make_dirac([1], CTX), make_dirac([2], CTX)])
    for c in (7, 5):
        for i in (1, 2):
            assert inversion_defect(b1, c, i, 1, 1, 2) == \
                inversion_defect_linear(b1, c, i, 1, 2)


def test_inversion_defect_bernoulli_part_dies_at_one():
    from zpmeasures.classical import _bernoulli_sum
    for i in (1, 2):
        for mu_exp in (1, 2, 3):
            assert _bernoulli_sum(Fraction(1), i, mu_exp, 3, 1) == 0


def test_inversion_defect_range_check():
    b1 = make_dirac([1], CTX)
    with pytest.raises(ValueError):
        inversion_defect(b1, 7, 0, 1, 1, 1)
