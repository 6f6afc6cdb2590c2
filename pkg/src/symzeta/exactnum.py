"""Exact rational Bernoulli numbers, Bernoulli polynomials and power sums.

Everything in this module is exact: values are `fractions.Fraction` throughout
(arbitrary-precision integers, normalized with positive denominator), so the
Euler-MacLaurin boundary corrections built on top of them carry no rounding
error of their own.

Bernoulli numbers are generated by exact power-series inversion of
(e^t - 1)/t, i.e. from the series whose reciprocal is t/(e^t - 1); this gives
B_1 = -1/2.  Bernoulli polynomials use the binomial convolution
B_n(x) = sum_k C(n,k) B_k x^(n-k), so B_n(0) = B_n.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import List, Union

Rational = Fraction

_ZERO = Fraction(0)


class BernoulliTable:
    """Memoized table of Bernoulli numbers and polynomial coefficients.

    Construction is the only mutation and happens behind a lock, so lookups
    are safe from concurrent threads; returned values are immutable.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        # reciprocal series c_n of sum t^k/(k+1)!, with B_n = n! * c_n
        self._recip: List[Fraction] = [Fraction(1)]
        self._numbers: List[Fraction] = [Fraction(1)]
        # poly_coeffs[n][k] = coefficient of x^k in B_n(x)
        self._poly_coeffs: List[List[Fraction]] = [[Fraction(1)]]

    @property
    def max_index(self) -> int:
        return len(self._numbers) - 1

    def _extend_numbers(self, n: int) -> None:
        # invert E(t) = (e^t - 1)/t = sum_k t^k/(k+1)! term by term:
        # c_0 = 1, c_m = -sum_{k=1..m} c_{m-k}/(k+1)!
        while len(self._recip) <= n:
            m = len(self._recip)
            acc = _ZERO
            for k in range(1, m + 1):
                acc += self._recip[m - k] / math.factorial(k + 1)
            self._recip.append(-acc)
            self._numbers.append(math.factorial(m) * self._recip[m])

    def _extend_polys(self, n: int) -> None:
        self._extend_numbers(n)
        while len(self._poly_coeffs) <= n:
            m = len(self._poly_coeffs)
            row = [
                Fraction(math.comb(m, k)) * self._numbers[m - k]
                for k in range(m + 1)
            ]
            self._poly_coeffs.append(row)

    def number(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("Bernoulli index must be >= 0")
        with self._lock:
            self._extend_numbers(n)
            return self._numbers[n]

    def poly_coefficients(self, n: int) -> List[Fraction]:
        if n < 0:
            raise ValueError("Bernoulli index must be >= 0")
        with self._lock:
            self._extend_polys(n)
            return list(self._poly_coeffs[n])


_TABLE = BernoulliTable()


def bernoulli_number(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention)."""
    return _TABLE.number(n)


def bernoulli_poly(n: int, x: Union[Fraction, int]) -> Fraction:
    """Exact value of the Bernoulli polynomial B_n(x) at rational x."""
    coeffs = _TABLE.poly_coefficients(n)
    xf = Fraction(x)
    acc = _ZERO
    # Horner, highest power first
    for c in reversed(coeffs):
        acc = acc * xf + c
    return acc


def _cast_like(c: Fraction, x):
    """Fraction -> the scalar type of ``x`` (float, numpy, or mpmath)."""
    if hasattr(x, "_mpf_") or hasattr(x, "_mpc_"):
        import mpmath

        return mpmath.mpf(c.numerator) / c.denominator
    return c.numerator / c.denominator


def bernoulli_poly_numeric(n: int, x):
    """B_n(x) evaluated in the arithmetic of ``x`` (float, array, or mpf)."""
    coeffs = _TABLE.poly_coefficients(n)
    acc = x * 0
    for c in reversed(coeffs):
        acc = acc * x + _cast_like(c, x)
    return acc


def periodic_bernoulli(k: int, x):
    """1-periodic Bernoulli function: B_k(x - floor(x)).

    ``x`` may be a float, a numpy array, or an mpmath mpf; the result uses
    the same arithmetic.
    """
    if k < 1:
        raise ValueError("periodic Bernoulli needs k >= 1")
    return bernoulli_poly_numeric(k, x - _floor_like(x))


def _floor_like(x):
    if hasattr(x, "_mpf_"):
        import mpmath

        return mpmath.floor(x)
    try:
        import numpy as np

        if isinstance(x, np.ndarray):
            return np.floor(x)
    except ImportError:  # pragma: no cover
        pass
    return math.floor(x)


def faulhaber_sum(p: int, N: int) -> Fraction:
    """Power sum 1^p + 2^p + ... + N^p as a polynomial in N, exactly.

    For N >= 1 this is the literal sum; for any other integer N it is the
    value of the unique interpolating polynomial
    (B_{p+1}(N+1) - B_{p+1})/(p+1), which vanishes at N = 0.  Used for
    two-sided hypercube sums.
    """
    if p < 0:
        raise ValueError("power must be >= 0")
    if p == 0:
        return Fraction(N)
    return (bernoulli_poly(p + 1, Fraction(N + 1)) - bernoulli_number(p + 1)) / (p + 1)


def two_sided_power_sum(p: int, N: int) -> Fraction:
    """sum_{n=-N..N} n^p as a polynomial in N (zero for odd p)."""
    if p % 2 == 1:
        return _ZERO
    if p == 0:
        return Fraction(2 * N + 1)
    return 2 * faulhaber_sum(p, N)
