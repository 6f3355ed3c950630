import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from syntaxdiag.epsilon import (
    EPS,
    ONE,
    ZERO,
    DivergesAtZero,
    EpsilonPoly,
    EpsilonRatio,
    env_weight,
    eventually_greater,
    limit_at_zero,
    order_at_zero,
    render,
    weighted_sum,
)


class TestEnvWeight:
    def test_full_environment(self):
        assert env_weight(3, 3) == EpsilonPoly([1, -3, 3, -1])

    def test_empty_environment(self):
        assert env_weight(3, 0) == EPS ** 3

    def test_mixed(self):
        assert env_weight(4, 2) == EpsilonPoly([0, 0, 1, -2, 1])

    def test_n_zero(self):
        assert env_weight(0, 0) == ONE

    @pytest.mark.parametrize("n,k", [(3, 4), (3, -1)])
    def test_domain(self, n, k):
        with pytest.raises(ValueError):
            env_weight(n, k)


class TestPolyArithmetic:
    def test_product_of_factors(self):
        assert EPS * (ONE - EPS) == EpsilonPoly([0, 1, -1])

    def test_trailing_zeros_stripped(self):
        assert EpsilonPoly([1, 2, 0, 0]) == EpsilonPoly([1, 2])
        assert EpsilonPoly([0, 0]).is_zero()

    def test_low_degree(self):
        p = EpsilonPoly([0, 0, 3, 1])
        assert p.low_degree() == 2 and p.low_coeff() == 3 and p.degree == 3
        assert ZERO.low_degree() is None

    def test_evaluate(self):
        assert EpsilonPoly([1, -3, 3, -1])(Fraction(1, 2)) == Fraction(1, 8)

    def test_render(self):
        assert render(EpsilonPoly([0, 0, 0, 2, -3])) == "2*e^3 - 3*e^4"
        assert render(ZERO) == "0"
        assert render(EpsilonPoly([-1, 0, 1])) == "-1 + e^2"


class TestLimitsAndOrders:
    def test_limit_two_thirds(self):
        r = EpsilonRatio(EpsilonPoly([2, 1]), EpsilonPoly([3, 1]))
        assert limit_at_zero(r) == Fraction(2, 3)

    def test_limit_zero(self):
        r = EpsilonRatio(EpsilonPoly([0, 1]), EpsilonPoly([1]))
        assert limit_at_zero(r) == 0

    def test_orders(self):
        assert order_at_zero(EpsilonRatio(EpsilonPoly([0, 0, 5]), EpsilonPoly([0, 1]))) == 1
        assert order_at_zero(EpsilonRatio(ZERO, ONE)) == math.inf
        assert order_at_zero(EpsilonRatio(ONE, EPS + ONE)) == 0

    def test_diverging(self):
        with pytest.raises(DivergesAtZero):
            limit_at_zero(EpsilonRatio(ONE, EPS))

    def test_series(self):
        # 1 / (1 - e) = 1 + e + e^2 + ...
        assert EpsilonRatio(ONE, ONE - EPS).series(4) == [1, 1, 1, 1]

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            EpsilonRatio(ONE, ZERO)

    def test_equality_by_cross_multiplication(self):
        assert EpsilonRatio(EpsilonPoly([0, 2]), EpsilonPoly([0, 4])) == EpsilonRatio(ONE, EpsilonPoly([2]))


class TestEventuallyGreater:
    def test_constant_beats_infinitesimal(self):
        assert eventually_greater(EpsilonRatio(EpsilonPoly([1, -1])), EpsilonRatio(EPS))
        assert not eventually_greater(EpsilonRatio(EPS), EpsilonRatio(EpsilonPoly([1, -1])))

    def test_lower_order_wins(self):
        assert eventually_greater(EPS, EPS ** 2)

    def test_equal_is_not_greater(self):
        assert not eventually_greater(EPS, EPS)

    def test_plain_numbers(self):
        assert eventually_greater(Fraction(2, 3), Fraction(1, 2))
        assert not eventually_greater(0, EPS)

    def test_same_leading_term(self):
        # 1/3 - e vs 1/3 - 2e
        a = EpsilonRatio(EpsilonPoly([1, -3]), EpsilonPoly([3]))
        b = EpsilonRatio(EpsilonPoly([1, -6]), EpsilonPoly([3]))
        assert eventually_greater(a, b) and not eventually_greater(b, a)


def _random_ratio(rng):
    def poly(lo):
        d = rng.randint(lo, lo + 3)
        return EpsilonPoly([0] * d + [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))])

    den = poly(0)
    while den.is_zero():
        den = poly(0)
    return EpsilonRatio(poly(den.low_degree()), den)


def test_eventually_greater_matches_tiny_epsilon():
    rng = random.Random(1234)
    x = Fraction(1, 10 ** 6)
    for _ in range(1000):
        r1, r2 = _random_ratio(rng), _random_ratio(rng)
        diff = r1(x) - r2(x)
        assert eventually_greater(r1, r2) == (diff > 0), (r1, r2)


coeffs = st.lists(st.integers(-4, 4), min_size=1, max_size=5)


@given(coeffs, coeffs)
def test_total_order(a, b):
    p, q = EpsilonPoly(a), EpsilonPoly(b)
    gt, lt = eventually_greater(p, q), eventually_greater(q, p)
    assert not (gt and lt)
    assert gt or lt or p == q


@given(coeffs, coeffs, coeffs)
def test_transitivity(a, b, c):
    p, q, r = EpsilonPoly(a), EpsilonPoly(b), EpsilonPoly(c)
    if eventually_greater(p, q) and eventually_greater(q, r):
        assert eventually_greater(p, r)


@given(st.integers(0, 12))
def test_weights_sum_to_one(n):
    assert weighted_sum([math.comb(n, k) for k in range(n + 1)], n) == ONE


@given(st.integers(1, 10), st.data())
def test_weight_positive_near_zero(n, data):
    k = data.draw(st.integers(0, n))
    w = env_weight(n, k)
    assert w.low_degree() == n - k and w.low_coeff() == 1
    assert w(Fraction(1, 1000)) > 0


@given(coeffs, coeffs)
def test_arithmetic_matches_evaluation(a, b):
    p, q = EpsilonPoly(a), EpsilonPoly(b)
    x = Fraction(2, 7)
    assert (p * q)(x) == p(x) * q(x)
    assert (p - q)(x) == p(x) - q(x)
    assert (p + q)(x) == p(x) + q(x)
