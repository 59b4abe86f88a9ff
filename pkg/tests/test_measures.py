import itertools
import random
from fractions import Fraction

import pytest

from zpmeasures.classical import make_dirac, make_M
from zpmeasures.measures import (DiracCombo, GradedSequence, LevelFamily,
                                 box_integral, exterior_product, lifts,
                                 linear_combine, measures_equal, moment,
                                 pushforward_affine, scale_action,
                                 signed_group, signed_perm_action,
                                 star_convolution, translate, unit_sequence,
                                 validate_distribution)
from zpmeasures.mpoly import MPoly
from zpmeasures.padic import INF, PrimeContext, vp

CTX = PrimeContext(3, 3)
CTX5 = PrimeContext(5, 2)


def dirac_pair():
    return make_dirac([1], CTX5), make_dirac([2], CTX5)


def test_validate_distribution_negative_control():
    mu = make_M(-1, CTX)
    tables = list(mu.tables)
    t2 = dict(tables[2])
    t2[(4,)] += 1
    tables[2] = t2
    bad = LevelFamily(CTX, 1, tuple(tables), mu.denom_bound)
    report = validate_distribution(bad)
    assert not report.passed
    assert report.level == 1 and report.point == (1,)
    assert report.defect == -1


def test_linear_combine_identities():
    a, b = dirac_pair()
    assert linear_combine([1, 0], [a, b]).tables == a.tables
    assert linear_combine([1, -1], [a, a]).is_zero()


def test_translate_and_errors():
    a = make_dirac([2], CTX)
    assert translate(a, [3]).tables == make_dirac([5], CTX).tables
    assert translate(a, [0]).tables == a.tables
    with pytest.raises(Exception):
        translate(a, [Fraction(1, 3)])


def test_scale_action_unit_only():
    a, _ = dirac_pair()
    assert scale_action(a, 1).tables == a.tables
    assert scale_action(a, -1).tables == make_dirac([-1], CTX5).tables
    with pytest.raises(ValueError):
        scale_action(a, 5)


def test_scale_action_moments():
    mu = linear_combine([1, 1], list(dirac_pair()))
    md = scale_action(mu, 2)
    v1, _ = moment(md, (2,), 2)
    v2, _ = moment(mu, (2,), 2)
    assert vp(v1 - 4 * v2, 5) >= 2


def test_scale_translate_composition():
    mu = linear_combine([1, 2], list(dirac_pair()))
    lhs = scale_action(translate(mu, [3]), 2)
    rhs = translate(scale_action(mu, 2), [6])
    assert lhs.tables == rhs.tables


def test_pushforward_affine():
    mu = linear_combine([1, 2], list(dirac_pair()))
    assert pushforward_affine(mu, [(-1, 0)]).tables == scale_action(mu, -1).tables
    assert pushforward_affine(make_dirac([0], CTX5), [(-1, 1)]).tables == \
        make_dirac([1], CTX5).tables
    twice = pushforward_affine(pushforward_affine(mu, [(-1, 1)]), [(-1, 1)])
    assert twice.tables == mu.tables


def test_signed_perm_action():
    d00 = make_dirac([0, 0], CTX5)
    assert signed_perm_action(d00, (0, 1), (1, 1)).tables == d00.tables
    mu = linear_combine([1, 2], list(dirac_pair()))
    one_flip = signed_perm_action(mu, (0,), (-1,))
    assert one_flip.tables == linear_combine([-1], [scale_action(mu, -1)]).tables
    # the sign character sums to zero over the group
    parts = [signed_perm_action(d00, perm, eps) for perm, eps in signed_group(2)]
    assert linear_combine([1] * 8, parts).is_zero()


def test_signed_perm_semidirect_composition():
    mu = exterior_product(*dirac_pair())
    perm, eps = (1, 0), (-1, 1)
    combined = signed_perm_action(mu, perm, eps)
    staged = signed_perm_action(signed_perm_action(mu, (0, 1), eps), perm, (1, 1))
    assert combined.tables == staged.tables


def test_exterior_product():
    a, b = dirac_pair()
    ab = exterior_product(a, b)
    assert ab.tables == make_dirac([1, 2], CTX5).tables
    c = make_dirac([0], CTX5)
    assert exterior_product(exterior_product(a, b), c).tables == \
        exterior_product(a, exterior_product(b, c)).tables


def test_exterior_transform_factorizes():
    from zpmeasures.measures import iwasawa_P, iwasawa_tensor
    alpha = linear_combine([1, 1], list(dirac_pair()))
    beta = make_dirac([0], CTX5)
    P = iwasawa_P(exterior_product(alpha, beta), 3, 2)
    Pt = iwasawa_tensor(iwasawa_P(alpha, 3, 2), iwasawa_P(beta, 3, 2))
    for e in itertools.product(range(4), repeat=2):
        assert P.coefficient(e) == Pt.coefficient(e)


def test_star_convolution_unit_and_associativity():
    a, b = dirac_pair()
    A = GradedSequence((unit_sequence(CTX5, 0)[0], a, exterior_product(a, a)))
    B = GradedSequence((unit_sequence(CTX5, 0)[0], b, exterior_product(b, b)))
    unit = unit_sequence(CTX5, 2)
    for i in range(3):
        assert star_convolution(A, unit)[i].tables == A[i].tables
        assert star_convolution(unit, A)[i].tables == A[i].tables
    # degree-1 entry of A*B with unit degree-0 parts
    assert star_convolution(A, B)[1].tables == linear_combine([1, 1], [a, b]).tables
    C = GradedSequence((unit_sequence(CTX5, 0)[0], make_dirac([3], CTX5),
                        exterior_product(make_dirac([3], CTX5), make_dirac([3], CTX5))))
    left = star_convolution(star_convolution(A, B), C)
    right = star_convolution(A, star_convolution(B, C))
    for i in range(3):
        assert left[i].tables == right[i].tables


def test_box_integral_basics():
    M = make_M(7, CTX)
    v, e = box_integral(M, (0,), 0, MPoly.const(1, 1), 3)
    assert v == M.total_mass() == 6
    assert e == 3
    d = make_dirac([2], CTX)
    v, _ = moment(d, (1,), 3)
    assert v == 2
    v2, _ = moment(make_M(-1, CTX), (1,), 2)
    v3, _ = moment(make_M(-1, CTX), (1,), 3)
    assert vp(v2 - v3, 3) >= 2
    with pytest.raises(ValueError):
        box_integral(M, (0,), 2, MPoly.const(1, 1), 1)


def test_measures_equal_modes():
    a, b = dirac_pair()
    assert measures_equal(a, a, 2, INF)
    assert not measures_equal(make_dirac([0], CTX5), make_dirac([1], CTX5), 1, 1)
    close = linear_combine([1], [a])
    tables = list(close.tables)
    t = dict(tables[2])
    t[(3,)] += 25
    tables[2] = t
    shifted = LevelFamily(CTX5, 1, tuple(tables), close.denom_bound)
    assert measures_equal(a, shifted, 2, 2)
    assert not measures_equal(a, shifted, 2, 3)


def test_dirac_combo_matches_level_tables():
    rng = random.Random(5)
    atoms = [((rng.randrange(-9, 9),), Fraction(rng.randrange(-3, 4))) for _ in range(4)]
    combo = DiracCombo.make(1, atoms)
    fam = combo.to_level_family(CTX)
    assert validate_distribution(fam).passed
    # box integral against the level family agrees mod p^m with the exact one
    poly = MPoly.var(1, 0) ** 2
    exact = combo.box_integral_exact((1,), 1, poly, 3)
    riemann, e = box_integral(fam, (1,), 1, poly, 3)
    assert vp(exact - riemann, 3) >= e


def test_distribution_relation_lift_count():
    assert len(list(lifts((0, 0), 3, 1, 2))) == 9
