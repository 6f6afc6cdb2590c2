import math

import mpmath as mp
import numpy as np
import pytest

import symzeta as sz
from symzeta.errors import ParameterError, PreconditionError
from symzeta.meromorphic import SweepOptions


def test_laurent_fit_constructed():
    fit = sz.laurent_fit(lambda z: 2.0 / z + 5.0 + z)
    assert abs(fit.c_minus1 - 2.0) < 1e-10
    assert abs(fit.c0 - 5.0) < 1e-10
    assert abs(fit.higher[0] - 1.0) < 1e-10
    assert not fit.pole_order_warning


def test_laurent_fit_double_pole_flagged():
    fit = sz.laurent_fit(lambda z: 1.0 / z**2)
    assert abs(fit.c_minus1) < 1e-10
    assert fit.pole_order_warning
    assert abs(fit.c_minus2 - 1.0) < 1e-10


def test_laurent_fit_zeta_oracle():
    gamma = float(mp.euler)
    fit = sz.laurent_fit(lambda z: complex(2 * mp.zeta(1 + z)))
    assert abs(fit.c_minus1 - 2.0) < 1e-8
    assert abs(fit.c0 - 2 * gamma) < 1e-8


def test_laurent_fit_parameter_checks():
    with pytest.raises(ParameterError):
        sz.laurent_fit(lambda z: 1 / z, npoints=12)  # not a power of two
    with pytest.raises(ParameterError):
        sz.laurent_fit(lambda z: 1 / z, radius=-1.0)


def test_laurent_fit_propagates_failures_with_point():
    def bad(z):
        raise ValueError("boom")

    with pytest.raises(ValueError) as exc:
        sz.laurent_fit(bad)
    assert hasattr(exc.value, "contour_point")


def test_sum_sweep_1d_harmonic():
    # chi |x|^-1 with slope -1: the sweep sees 2 zeta(1 + z)
    fam = sz.riesz_family(sz.radial_power_symbol(1, -1.0), -1.0)
    fit = sz.zsweep_regularized_sum(fam)
    assert abs(fit.c_minus1 - 2.0) < 1e-6
    assert abs(fit.c0 - 2 * float(mp.euler)) < 1e-8


def test_sum_sweep_residue_formula_1d():
    sig = sz.radial_power_symbol(1, -1.0)
    fam = sz.riesz_family(sig, -1.0)
    fit = sz.zsweep_regularized_sum(fam)
    pred = (
        -math.sqrt(2 * math.pi)
        * complex(sz.noncommutative_residue(sig))
        / fam.alpha_prime
    )
    assert abs(fit.c_minus1 - pred) < 1e-10


def test_sum_sweep_noninteger_order_holomorphic():
    sig = sz.radial_power_symbol(1, -1.5)
    fam = sz.riesz_family(sig, -1.0)
    fit = sz.zsweep_regularized_sum(fam)
    assert abs(fit.c_minus1) < 1e-8
    assert abs(fit.c0 - sz.cutoff_sum_1d(sig)) < 1e-6


def test_integral_sweep_1d():
    sig = sz.radial_power_symbol(1, -1.0)
    fam = sz.riesz_family(sig, -1.0)
    fit = sz.zsweep_regularized_integral(fam)
    assert abs(fit.c_minus1 - 2.0) < 1e-8
    sig2 = sz.radial_power_symbol(1, -1.5)
    fam2 = sz.riesz_family(sig2, -1.0)
    fit2 = sz.zsweep_regularized_integral(fam2)
    assert abs(fit2.c0 - sz.cutoff_integral(sig2).value) < 1e-8


def test_integral_sweep_residue_formula_2d():
    sig = sz.radial_power_symbol(2, -2.0)
    fam = sz.riesz_family(sig, -1.0)
    fit = sz.zsweep_regularized_integral(fam)
    pred = (
        -math.sqrt(2 * math.pi) ** 2
        * complex(sz.noncommutative_residue(sig))
        / fam.alpha_prime
    )
    assert abs(pred - 2 * math.pi) < 1e-12
    assert abs(fit.c_minus1 - pred) < 1e-5


def test_contour_radius_robustness():
    sig = sz.radial_power_symbol(1, -1.0)
    fam = sz.riesz_family(sig, -1.0)
    f1 = sz.zsweep_regularized_sum(fam, SweepOptions(radius=0.25))
    f2 = sz.zsweep_regularized_sum(fam, SweepOptions(radius=0.125))
    tol = max(f1.max_aliasing_estimate, f2.max_aliasing_estimate, 1e-12)
    assert abs(f1.c_minus1 - f2.c_minus1) <= 10 * tol
    assert abs(f1.c0 - f2.c0) <= 10 * tol


def test_polynomial_order_family_has_no_residue():
    # q(x)^1 is a polynomial; both sweeps are pole-free at z = 0
    q = sz.QuadraticForm.identity(2)
    fam = sz.riesz_family(sz.quadratic_symbol(q, -1.0), -1.0)
    sfit = sz.zsweep_regularized_sum(fam)
    ifit = sz.zsweep_regularized_integral(fam)
    assert abs(sfit.c_minus1) < 1e-8
    assert abs(ifit.c_minus1) < 1e-8
    fam1 = sz.riesz_family(sz.radial_power_symbol(1, 2.0), -1.0)
    assert abs(sz.zsweep_regularized_sum(fam1).c_minus1) < 1e-10


def test_compare_regularizations_identical():
    fam = sz.riesz_family(sz.radial_power_symbol(1, -1.5), -1.0)
    assert sz.compare_regularizations(fam, fam) == 0.0


def test_compare_regularizations_different_gates():
    sig = sz.radial_power_symbol(1, -1.5)
    fam1 = sz.riesz_family(sig, -1.0)
    fam2 = sz.riesz_family(sig, -1.0, gate=sz.CutoffFunction(0.4, 0.8))
    diff = sz.compare_regularizations(fam1, fam2)
    pred = sz.residue_comparison_prediction(fam1, fam2)
    # both families fix the symbol on the unit sphere: difference vanishes
    assert abs(pred) < 1e-12
    assert abs(diff - pred) < 1e-5
    diff_int = sz.compare_regularizations(fam1, fam2, target="integral")
    assert abs(diff_int) < 1e-6


def test_compare_regularizations_noninteger_zero():
    sig = sz.radial_power_symbol(2, -1.3)
    fam1 = sz.riesz_family(sig, -1.0)
    fam2 = sz.riesz_family(sig, -1.0, gate=sz.CutoffFunction(0.45, 0.9))
    diff = sz.compare_regularizations(fam1, fam2, target="integral")
    assert abs(diff) < 1e-6


def test_compare_regularizations_preconditions():
    fam1 = sz.riesz_family(sz.radial_power_symbol(1, -1.5), -1.0)
    fam2 = sz.riesz_family(sz.radial_power_symbol(1, -1.5), -2.0)
    with pytest.raises(PreconditionError):
        sz.compare_regularizations(fam1, fam2)
    fam3 = sz.riesz_family(sz.radial_power_symbol(1, -2.5), -1.0)
    with pytest.raises(PreconditionError):
        sz.compare_regularizations(fam1, fam3)
