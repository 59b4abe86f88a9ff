import itertools
import math
from fractions import Fraction

from zpmeasures.classical import make_M, make_dirac, make_E1
from zpmeasures.measures import (iwasawa_P, iwasawa_flip, iwasawa_swap,
                                 iwasawa_tensor, linear_combine, scale_action,
                                 transform_F, transform_F_via_P, translate)
from zpmeasures.padic import PrimeContext, bernoulli, binom, vp

CTX = PrimeContext(3, 4)
CTX5 = PrimeContext(5, 3)


def series_division_expected(c, k):
    # ((1+T)^c - (1+T))/T has T^k coefficient binom(c, k+1) - [k = 0]
    return binom(c, k + 1) - (1 if k == 0 else 0)


def test_iwasawa_of_dirac_is_binomial():
    P = iwasawa_P(make_dirac([5], CTX), 6, 4)
    for k in range(7):
        assert P.coefficient((k,)) == binom(5, k)


def test_iwasawa_of_translated_dirac():
    P = iwasawa_P(translate(make_dirac([0], CTX), [1]), 4, 4)
    for k in range(5):
        assert P.coefficient((k,)) == (1 if k <= 1 else 0)


def test_iwasawa_of_interpolation_measure():
    for c in (7, Fraction(1, 2)):
        M = make_M(c, CTX)
        P = iwasawa_P(M, 6, 4)
        for k in range(7):
            e = P.guarantees[(k,)]
            assert e == 4 - vp(math.factorial(k), 3)
            assert vp(P.coefficient((k,)) - series_division_expected(c, k), 3) >= e


def test_iwasawa_zero_measure():
    P = iwasawa_P(make_M(1, CTX), 4, 3)
    assert all(v == 0 for v in P.coeffs.values())


def test_translation_functoriality():
    # P(T_c mu) = P(mu) (1+T)^c coefficientwise within guarantees
    mu = linear_combine([1, 2], [make_dirac([1], CTX), make_dirac([3], CTX)])
    c = 4
    lhs = iwasawa_P(translate(mu, [c]), 5, 4)
    base = iwasawa_P(mu, 5, 4)
    for k in range(6):
        want = sum(base.coefficient((j,)) * binom(c, k - j) for j in range(k + 1))
        assert vp(lhs.coefficient((k,)) - want, 3) >= lhs.guarantees[(k,)]


def test_scale_functoriality_general_unit():
    # P(m_d mu)(T) = P(mu)((1+T)^d - 1) within guarantees, d = 2
    mu = linear_combine([1, 2], [make_dirac([1], CTX5), make_dirac([3], CTX5)])
    K = 4
    base = iwasawa_P(mu, K, 3)
    direct = iwasawa_P(scale_action(mu, 2), K, 3)
    # ((1+T)^2 - 1)^j = (2T + T^2)^j, composed exactly on the truncation
    subst = [Fraction(0)] * (K + 1)
    comp = {0: {0: Fraction(1)}}
    for j in range(1, K + 1):
        prev = comp[j - 1]
        cur = {}
        for deg, cf in prev.items():
            for d_, c_ in ((1, Fraction(2)), (2, Fraction(1))):
                if deg + d_ <= K:
                    cur[deg + d_] = cur.get(deg + d_, Fraction(0)) + cf * c_
        comp[j] = cur
    for k in range(K + 1):
        want = sum(base.coefficient((j,)) * comp[j].get(k, Fraction(0))
                   for j in range(K + 1))
        e = min(direct.guarantees[(k,)], base.guarantees[(k,)])
        assert vp(direct.coefficient((k,)) - want, 5) >= e


def test_scale_functoriality_via_flip():
    # P(m_{-1} mu)(T) = P(mu)((1+T)^{-1} - 1) within guarantees
    mu = linear_combine([1, 2], [make_dirac([1], CTX5), make_dirac([3], CTX5)])
    P = iwasawa_P(mu, 4, 3)
    flipped = iwasawa_flip(P, {0}, 5)
    direct = iwasawa_P(scale_action(mu, -1), 4, 3)
    for k in range(5):
        e = min(flipped.guarantees[(k,)], direct.guarantees[(k,)])
        assert vp(flipped.coefficient((k,)) - direct.coefficient((k,)), 5) >= e


def test_exponential_transform_of_dirac():
    F = transform_F(make_dirac([2], CTX), 5, 4)
    for k in range(6):
        assert F.coefficient((k,)) == Fraction(2 ** k, math.factorial(k))


def test_exponential_transform_two_routes():
    mu = linear_combine([1, 2], [make_dirac([1], CTX), make_dirac([3], CTX)])
    F1 = transform_F(mu, 5, 4)
    F2 = transform_F_via_P(iwasawa_P(mu, 5, 4), 3)
    for k in range(6):
        e = min(F1.guarantees[(k,)], F2.guarantees[(k,)])
        assert vp(F1.coefficient((k,)) - F2.coefficient((k,)), 3) >= e
        assert F1.coefficient((k,)) == Fraction(1 ** k + 2 * 3 ** k, math.factorial(k))


def test_e1_exponential_coefficients():
    E = make_E1(2, CTX5)
    F = transform_F(E, 5, 3)
    for k in range(1, 7):
        want = Fraction(bernoulli(k), k) * (1 - Fraction(2) ** k) / math.factorial(k - 1)
        assert vp(F.coefficient((k - 1,)) - want, 5) >= F.guarantees[(k - 1,)]


def test_swap_and_tensor():
    a = linear_combine([1, 1], [make_dirac([1], CTX5), make_dirac([2], CTX5)])
    b = make_dirac([3], CTX5)
    P = iwasawa_P(linear_combine([1], [a]), 3, 2)
    Q = iwasawa_P(b, 3, 2)
    T = iwasawa_tensor(P, Q)
    S = iwasawa_swap(T, (1, 0))
    for e in itertools.product(range(4), repeat=2):
        assert S.coefficient(e) == T.coefficient((e[1], e[0]))


def test_iwasawa_json_shape():
    P = iwasawa_P(make_dirac([1], CTX), 2, 2)
    d = P.to_json_dict()
    assert set(d) == {"dim", "terms", "coeffs"}
    assert all(set(row) == {"exp", "value", "guarantee"} for row in d["coeffs"])
