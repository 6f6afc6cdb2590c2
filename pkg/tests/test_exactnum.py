from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from symzeta import exactnum


def test_bernoulli_numbers_low_indices():
    assert exactnum.bernoulli_number(0) == 1
    assert exactnum.bernoulli_number(1) == Fraction(-1, 2)
    assert exactnum.bernoulli_number(2) == Fraction(1, 6)
    assert exactnum.bernoulli_number(12) == Fraction(-691, 2730)


def test_odd_bernoulli_vanish():
    for k in range(1, 15):
        assert exactnum.bernoulli_number(2 * k + 1) == 0


def test_bernoulli_poly_values():
    # B_1(x) = x - 1/2
    assert exactnum.bernoulli_poly(1, 5) == Fraction(9, 2)
    assert exactnum.bernoulli_poly(2, Fraction(1, 2)) == Fraction(-1, 12)
    for n in range(12):
        assert exactnum.bernoulli_poly(n, 0) == exactnum.bernoulli_number(n)
    for n in range(2, 12):
        assert exactnum.bernoulli_poly(n, 1) == exactnum.bernoulli_number(n)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=40),
    num=st.integers(min_value=-50, max_value=50),
    den=st.integers(min_value=1, max_value=12),
)
def test_bernoulli_difference_identity(n, num, den):
    # B_n(x+1) - B_n(x) = n x^(n-1), exactly
    x = Fraction(num, den)
    lhs = exactnum.bernoulli_poly(n, x + 1) - exactnum.bernoulli_poly(n, x)
    assert lhs == n * x ** (n - 1)


def test_periodic_bernoulli_values():
    assert abs(exactnum.periodic_bernoulli(2, 2.5) - float(Fraction(-1, 12))) < 1e-15
    for n in (-3, 0, 7):
        assert exactnum.periodic_bernoulli(1, float(n)) == -0.5
    x = 0.3721
    assert abs(exactnum.periodic_bernoulli(3, x) - exactnum.periodic_bernoulli(3, x + 1.0)) < 1e-15


def test_periodic_bernoulli_zero_mean():
    # integral over one period vanishes; Gauss-Legendre on [0, 1]
    nodes, weights = np.polynomial.legendre.leggauss(48)
    xs = 0.5 * (nodes + 1.0)
    for k in range(1, 9):
        vals = exactnum.bernoulli_poly_numeric(k, xs)
        integral = 0.5 * np.dot(weights, vals)
        assert abs(integral) < 1e-12


@settings(max_examples=30, deadline=None)
@given(p=st.integers(min_value=0, max_value=8), N=st.integers(min_value=0, max_value=50))
def test_faulhaber_matches_accumulation(p, N):
    direct = sum(Fraction(n) ** p for n in range(1, N + 1))
    assert exactnum.faulhaber_sum(p, N) == direct


def test_faulhaber_examples():
    assert exactnum.faulhaber_sum(1, 10) == 55
    assert exactnum.faulhaber_sum(3, 4) == 100
    for p in range(9):
        assert exactnum.faulhaber_sum(p, 0) == 0


def test_faulhaber_polynomial_extension():
    # value at negative N from the interpolating polynomial
    # S_2(N) = N(N+1)(2N+1)/6
    for N in (-1, -2, -5):
        want = Fraction(N * (N + 1) * (2 * N + 1), 6)
        assert exactnum.faulhaber_sum(2, N) == want


def test_two_sided_power_sum():
    assert exactnum.two_sided_power_sum(0, 4) == 9
    assert exactnum.two_sided_power_sum(3, 10) == 0
    assert exactnum.two_sided_power_sum(2, 3) == 2 * (1 + 4 + 9)


def test_table_is_memoized_and_consistent():
    table = exactnum.BernoulliTable()
    assert table.number(20) == exactnum.bernoulli_number(20)
    coeffs = table.poly_coefficients(6)
    x = Fraction(3, 7)
    horner = sum(c * x**k for k, c in enumerate(coeffs))
    assert horner == exactnum.bernoulli_poly(6, x)
