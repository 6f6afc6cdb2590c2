import math

import mpmath as mp
import numpy as np
import pytest

import symzeta as sz
from symzeta.errors import PreconditionError
from symzeta.reg_sum import AsymptoticModel, finite_part_extract
from symzeta.symbols import Remainder


def test_sphere_surface_values():
    ones = lambda om: np.ones(om.shape[0])
    assert abs(sz.sphere_integral(ones, 2) - 2 * math.pi) < 1e-12
    assert abs(sz.sphere_integral(ones, 3) - 4 * math.pi) < 1e-10
    assert abs(sz.sphere_integral(ones, 4) - 2 * math.pi**2) < 1e-9


def test_sphere_integral_cos_squared():
    val = sz.sphere_integral(lambda om: om[:, 0] ** 2, 2)
    assert abs(val - math.pi) < 1e-12


def test_sphere_quadrature_weights_and_harmonics():
    for d in (2, 3, 4):
        rule = sz.sphere_quadrature(d, 2)
        assert abs(np.sum(rule.weights) - sz.reg_integral.sphere_surface(d)) < 1e-11
        assert np.all(rule.weights > 0)
    # degree-2 spherical harmonic integrates to zero exactly on S^2
    rule = sz.sphere_quadrature(3, 1)
    harm = rule.nodes[:, 0] * rule.nodes[:, 1]
    assert abs(np.dot(rule.weights, harm)) < 1e-13


def test_residue_examples(diag14):
    s = sz.radial_power_symbol(1, -1.0)
    assert abs(sz.noncommutative_residue(s) - 2 / math.sqrt(2 * math.pi)) < 1e-14
    assert sz.noncommutative_residue(sz.radial_power_symbol(1, -1.5)) == 0.0
    sq = sz.quadratic_symbol(diag14, 1.0)  # degree -2 component in d = 2
    want = sz.sphere_integral(lambda om: 1.0 / diag14(om), 2) / (2 * math.pi)
    assert abs(sz.noncommutative_residue(sq) - want) < 1e-12


def test_residue_vanishes_on_derivatives():
    base = sz.radial_power_symbol(1, -1.3)
    deriv = sz.derivative_1d(base, 1).as_symbol()
    assert sz.noncommutative_residue(deriv) == 0.0


def test_cutoff_integral_matches_direct_fp_1d():
    # fp of integrals over [-R, R], extracted independently by quadrature
    sig = sz.radial_power_symbol(1, -1.5)
    Rs = (8.0, 16.0, 24.0, 32.0, 48.0, 64.0)
    vals = [sz.ball_integral_numeric(sig, R, tol=1e-11) for R in Rs]
    fit = finite_part_extract(list(zip(Rs, vals)), AsymptoticModel((-0.5,)))
    assert abs(fit.constant - sz.cutoff_integral(sig).value) < 1e-6


def test_cutoff_integral_convergent_case():
    sig = sz.radial_power_symbol(1, -2.5)
    direct = sz.ball_integral_numeric(sig, 4000.0, tol=1e-10)
    # tail bound: 2 * R^(-1.5) / 1.5
    assert abs(sz.cutoff_integral(sig).value - direct) < 1e-4
    sig2 = sz.radial_power_symbol(2, -3.5)
    direct2 = sz.ball_integral_numeric(sig2, 300.0, tol=1e-9)
    assert abs(sz.cutoff_integral(sig2).value - direct2) < 1e-3


def test_cutoff_integral_pure_power_vanishes_formula(identity2):
    # single homogeneous q^-s with no log obstruction: the fp over balls of
    # the pure power is zero, so the cutoff integral reduces to the chi-ball
    # part minus the sphere term; cross-check against explicit radial moments
    s = 0.4
    sig = sz.quadratic_symbol(identity2, s)
    res = sz.cutoff_integral(sig)
    S = sz.sphere_integral(lambda om: np.power(identity2(om).astype(complex), -s), 2)
    with mp.workdps(30):
        chi_moment = mp.quad(
            lambda r: sig.cutoff.radial_mp(r) * mp.power(r, -2 * s + 1), [0.5, 1.0]
        )
    want = complex(chi_moment) * S - S / (-2 * s + 2)
    assert abs(res.value - want) < 1e-12
    assert not res.flags["had_log_obstruction"]


def test_cutoff_integral_log_obstruction_flag():
    sig = sz.radial_power_symbol(2, -2.0)
    res = sz.cutoff_integral(sig)
    assert res.flags["had_log_obstruction"]


def test_cutoff_integral_linearity():
    a = sz.radial_power_symbol(2, -1.5)
    b = sz.radial_power_symbol(2, -1.5, coefficient=0.7)
    va = sz.cutoff_integral(a).value
    vb = sz.cutoff_integral(b).value
    assert abs(vb - 0.7 * va) < 1e-10 * max(1.0, abs(va))
    # additivity across aligned degrees: chi(2|x|^a + 3|x|^(a-1))
    from symzeta.symbols import HomogeneousComponent, RadialProfile

    two = sz.ClassicalSymbol(
        2,
        -1.5,
        (
            HomogeneousComponent(-1.5, RadialProfile(2.0)),
            HomogeneousComponent(-2.5, RadialProfile(3.0)),
        ),
        sz.CutoffFunction(),
    )
    parts = 2 * va + 3 * sz.cutoff_integral(sz.radial_power_symbol(2, -2.5)).value
    assert abs(sz.cutoff_integral(two).value - parts) < 1e-10


def test_cutoff_integral_with_remainder():
    rem = Remainder(lambda pts: np.exp(-np.linalg.norm(pts, axis=-1) ** 2), -10.0)
    comp = sz.HomogeneousComponent(-2.5, sz.symbols.RadialProfile(1.0))
    sig = sz.ClassicalSymbol(1, -2.5, (comp,), sz.CutoffFunction(), rem)
    base = sz.radial_power_symbol(1, -2.5)
    want = sz.cutoff_integral(base).value + math.sqrt(math.pi)
    assert abs(sz.cutoff_integral(sig).value - want) < 1e-8


def test_remainder_decay_precondition():
    rem = Remainder(lambda pts: 1.0 / (1.0 + np.linalg.norm(pts, axis=-1)), -1.0)
    comp = sz.HomogeneousComponent(0.5, sz.symbols.RadialProfile(1.0))
    sig = sz.ClassicalSymbol(2, 0.5, (comp,), sz.CutoffFunction(), rem)
    with pytest.raises(PreconditionError):
        sz.cutoff_integral(sig)


def test_ball_integral_order_zero_annulus(identity2):
    # order-0 symbol: chi * 1; area of the disc minus the chi hole
    sig = sz.quadratic_symbol(identity2, 0.0)
    val = sz.ball_integral_numeric(sig, 3.0, tol=1e-10)
    with mp.workdps(30):
        hole = mp.quad(
            lambda r: (1 - sig.cutoff.radial_mp(r)) * r, [0.0, 0.5, 1.0]
        )
    want = math.pi * 9.0 - 2 * math.pi * float(hole)
    assert abs(val - want) < 1e-8


def test_ball_integral_radial_convergent():
    sig = sz.radial_power_symbol(2, -3.0)
    val = sz.ball_integral_numeric(sig, 40.0, tol=1e-10)
    with mp.workdps(30):
        want = 2 * mp.pi * mp.quad(
            lambda r: sig.cutoff.radial_mp(r) * r ** mp.mpf(-2), [0.5, 1.0, 40.0]
        )
    assert abs(val - complex(want)) < 1e-8


def test_supball_equals_ball_in_1d():
    sig = sz.radial_power_symbol(1, -1.5)
    assert (
        abs(
            sz.supball_integral_numeric(sig, 8.0)
            - sz.ball_integral_numeric(sig, 8.0)
        )
        < 1e-12
    )


@pytest.mark.parametrize("a", [-1.5, -2.5, -0.7, 0.3, -3.2])
def test_supnorm_euclidean_fp_equality(a):
    sig = sz.radial_power_symbol(2, a)
    Rs = (4.0, 6.0, 8.0, 12.0, 16.0)
    model = AsymptoticModel((a + 2.0,))
    bv = [sz.ball_integral_numeric(sig, R, tol=1e-10) for R in Rs]
    sv = [sz.supball_integral_numeric(sig, R, tol=1e-10) for R in Rs]
    fb = finite_part_extract(list(zip(Rs, bv)), model)
    fs = finite_part_extract(list(zip(Rs, sv)), model)
    assert abs(fb.constant - fs.constant) < 1e-5


def test_polytope_correction_nonint_order_zero():
    assert sz.polytope_ball_correction(sz.radial_power_symbol(2, -1.5)) == 0.0


def test_polytope_correction_closed_form():
    # corners of [-1,1]^2 against |x|^-2: 2 pi log 2 - 4 Catalan
    sig = sz.radial_power_symbol(2, -2.0)
    val = sz.polytope_ball_correction(sig)
    want = 2 * math.pi * math.log(2.0) - 4 * float(mp.catalan)
    assert abs(val - want) < 1e-10
    assert val.real > 0


def test_polytope_correction_matches_fp_difference():
    sig = sz.radial_power_symbol(2, -2.0)
    corr = sz.polytope_ball_correction(sig)
    Rs = (4.0, 6.0, 8.0, 12.0, 16.0)
    model = AsymptoticModel((), include_log=True)
    bv = [sz.ball_integral_numeric(sig, R, tol=1e-10) for R in Rs]
    sv = [sz.supball_integral_numeric(sig, R, tol=1e-10) for R in Rs]
    fb = finite_part_extract(list(zip(Rs, bv)), model)
    fs = finite_part_extract(list(zip(Rs, sv)), model)
    assert abs((fs.constant - fb.constant) - corr) < 2e-4
    # the log coefficient of the ball integrals is the sphere integral of
    # the degree-(-2) component
    assert abs(fb.log_coeff - 2 * math.pi) < 1e-6


def test_polytope_correction_dimension_guard():
    with pytest.raises(PreconditionError):
        sz.polytope_ball_correction(sz.radial_power_symbol(1, -1.0))
