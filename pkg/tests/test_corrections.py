import itertools
import random
from fractions import Fraction

from zpmeasures.corrections import (four_term_sum, reflect_shift_identity,
                                    shift_identity, sign_change_identity,
                                    standard_integrand)
from zpmeasures.measures import DiracCombo

SHAPES = [s for s in itertools.product(range(3), repeat=3) if sum(s) <= 2]


def random_combo(rng, dim, natoms=4):
    atoms = [(tuple(rng.randrange(-6, 7) for _ in range(dim)),
              Fraction(rng.randrange(-3, 4), rng.choice((1, 2))))
             for _ in range(natoms)]
    return DiracCombo.make(dim, atoms)


def test_integrand_shape():
    poly = standard_integrand((1, 1, 0), (0, 1), 3)
    # ((0 - x1)/3)^1 * ((x1 - x2 - 0 + 1)/3)^1
    assert poly.evaluate((3, 4)) == Fraction(-3, 3) * Fraction(0, 3)
    assert poly.evaluate((0, 1)) == 0


def test_change_of_variable_identities_exact():
    rng = random.Random(99)
    for _ in range(10):
        beta = random_combo(rng, 2)
        for shape in SHAPES:
            for base in [(0, 1), (1, 2), (2, 0), (1, 1)]:
                l, r = sign_change_identity(beta, base, shape, 3, 1)
                assert l == r
                l, r = reflect_shift_identity(beta, base, shape, 3, 1)
                assert l == r
                l, r = shift_identity(beta, base, shape, 3, 1)
                assert l == r


def test_four_term_sum_even_measures():
    rng = random.Random(12)
    for _ in range(5):
        g = random_combo(rng, 2)
        beta = g + g.negated_points()
        for shape in SHAPES:
            for base in [(0, 1), (1, 2), (2, 2)]:
                assert four_term_sum(beta, base, shape, 3, 1) == 0


def test_four_term_sum_detects_odd_measures():
    # a generic non-even measure leaves a nonzero sum for some shape
    beta = DiracCombo.make(2, [((1, 2), Fraction(1))])
    hits = [four_term_sum(beta, base, shape, 3, 1)
            for shape in SHAPES for base in itertools.product(range(3), repeat=2)]
    assert any(h != 0 for h in hits)


def test_identities_in_higher_rank():
    rng = random.Random(7)
    shapes = [s for s in itertools.product(range(2), repeat=4) if sum(s) <= 2]
    for _ in range(3):
        beta = random_combo(rng, 3)
        for shape in shapes:
            l, r = sign_change_identity(beta, (0, 1, 2), shape, 2, 1)
            assert l == r
            l, r = shift_identity(beta, (1, 1, 0), shape, 2, 1)
            assert l == r
