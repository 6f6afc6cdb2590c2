"""Acceptance suite: every release criterion with its stated tolerance.

Each test prints one PASS/FAIL line so a plain `pytest -s tests/test_acceptance.py`
reads as a checklist.  Tolerances are pinned here and must not be loosened.
"""

import itertools
import math
import time
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

import symzeta as sz
from symzeta.exactnum import bernoulli_poly
from symzeta.reg_sum import (
    AsymptoticModel,
    Polynomial,
    kp_hypercube_polynomial_sum,
    lattice_fp_of_evaluator,
    polynomial_symbol,
)


def _report(name: str, err, tol, extra: str = "") -> None:
    status = "PASS" if err < tol else "FAIL"
    print(f"[{status}] {name}: err={err:.3e} tol={tol:.0e} {extra}")
    assert err < tol, f"{name}: {err:.3e} >= {tol:.0e}"


# -- 1 ----------------------------------------------------------------------

def test_criterion_01_bernoulli_zeta_values():
    t0 = time.perf_counter()
    e1 = abs(sz.riemann_zeta_reg(-1).value + 1.0 / 12.0)
    e2 = abs(sz.riemann_zeta_reg(-3).value - 1.0 / 120.0)
    dt = time.perf_counter() - t0
    _report("criterion 1: zeta(-1), zeta(-3)", max(e1, e2), 1e-8, f"dt={dt:.2f}s")
    assert dt < 1.0


# -- 2 ----------------------------------------------------------------------

def test_criterion_02_hurwitz_bernoulli_identity():
    worst = 0.0
    for k in range(5):
        for p in (Fraction(1, 2), Fraction(1), Fraction(3)):
            got = sz.hurwitz_zeta_reg(-k, float(p)).value
            want = -float(bernoulli_poly(k + 1, p)) / (k + 1)
            worst = max(worst, abs(got - want))
    _report("criterion 2: Hurwitz Bernoulli identity", worst, 1e-9)


# -- 3 ----------------------------------------------------------------------

def _random_polynomial(rng, d, deg):
    terms = {}
    for _ in range(int(rng.integers(2, 7))):
        alpha = tuple(int(a) for a in rng.integers(0, deg + 1, size=d))
        if sum(alpha) > deg:
            continue
        terms[alpha] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
    terms.setdefault((0,) * d, Fraction(int(rng.integers(-5, 6))))
    return Polynomial.from_dict(d, terms)


def test_criterion_03_polynomial_fp_vanishing():
    rng = np.random.default_rng(7)
    worst = 0.0
    for i in range(10):
        d = int(rng.integers(1, 4))
        deg = int(rng.integers(0, 5))
        P = _random_polynomial(rng, d, deg)
        res = sz.cutoff_sum_lattice(polynomial_symbol(P))
        worst = max(worst, abs(res.constant))
    _report("criterion 3: polynomial lattice fp vanishes", worst, 1e-7)


# -- 4 ----------------------------------------------------------------------

def test_criterion_04_hypercube_polynomial_sums_exact():
    rng = np.random.default_rng(11)
    failures = 0
    for _ in range(20):
        d = int(rng.integers(1, 4))
        deg = int(rng.integers(0, 5))
        N = int(rng.integers(1, 7 if d < 3 else 5))
        P = _random_polynomial(rng, d, deg)
        brute = sum(
            P.evaluate_exact(pt)
            for pt in itertools.product(range(-N, N + 1), repeat=d)
        )
        if kp_hypercube_polynomial_sum(P, N) != brute:
            failures += 1
    _report("criterion 4: hypercube polynomial sums exact", float(failures), 0.5, "(20 cases)")


# -- 5 ----------------------------------------------------------------------

def test_criterion_05_supnorm_euclidean_fp_equality():
    worst = 0.0
    Rs = (4.0, 6.0, 8.0, 12.0, 16.0)
    for a in (-1.5, -2.5, -0.7, 0.3, -3.2):
        sig = sz.radial_power_symbol(2, a)
        model = AsymptoticModel((a + 2.0,))
        fb = sz.finite_part_extract(
            [(R, sz.ball_integral_numeric(sig, R, tol=1e-10)) for R in Rs], model
        )
        fs = sz.finite_part_extract(
            [(R, sz.supball_integral_numeric(sig, R, tol=1e-10)) for R in Rs], model
        )
        worst = max(worst, abs(fb.constant - fs.constant))
    _report("criterion 5a: sup-norm fp = euclidean fp (non-integer orders)", worst, 1e-5)

    sig = sz.radial_power_symbol(2, -2.0)
    corr = sz.polytope_ball_correction(sig)
    model = AsymptoticModel((), include_log=True)
    fb = sz.finite_part_extract(
        [(R, sz.ball_integral_numeric(sig, R, tol=1e-10)) for R in Rs], model
    )
    fs = sz.finite_part_extract(
        [(R, sz.supball_integral_numeric(sig, R, tol=1e-10)) for R in Rs], model
    )
    err = abs((fs.constant - fb.constant) - corr)
    _report("criterion 5b: integer order -2 fp gap = corner correction", err, 2e-4)


# -- 6 ----------------------------------------------------------------------

def test_criterion_06_translation_invariance():
    from scipy import integrate as si

    sig = sz.radial_power_symbol(1, -1.5)
    base_sum = sz.cutoff_sum_lattice(sig).constant
    base_int = sz.cutoff_integral(sig).value
    model_sum = AsymptoticModel(tuple(0.5 - j for j in range(7)))
    model_int = AsymptoticModel(tuple(-0.5 - j for j in range(5)))
    NRs = (48, 64, 96, 128, 192, 256, 384, 512, 768, 1024)
    Rs = (32.0, 48.0, 64.0, 96.0, 128.0, 192.0, 256.0, 384.0)
    worst_sum = 0.0
    worst_C = 0.0
    for p in (1.0, 3.0):
        tr = sz.translate(sig, p)
        fpt = lattice_fp_of_evaluator(tr, model_sum, NRs, dtype=np.clongdouble)
        worst_sum = max(worst_sum, abs(fpt.constant - base_sum))
        ivals = [
            si.quad(
                lambda x: tr.evaluate(np.array([[x]]))[0].real,
                -R, R, limit=400, epsabs=1e-13, epsrel=1e-13,
            )[0]
            for R in Rs
        ]
        fit = sz.finite_part_extract(list(zip(Rs, ivals)), model_int)
        worst_C = max(worst_C, abs((fpt.constant - fit.constant) - (base_sum - base_int)))
    _report("criterion 6a: translation invariance of the regularized sum", worst_sum, 1e-7)
    _report("criterion 6b: translation invariance of C", worst_C, 1e-7)


# -- 7 ----------------------------------------------------------------------

def test_criterion_07_residue_formulas():
    worst_fmla = 0.0
    worst_pair = 0.0
    for sig, d in ((sz.radial_power_symbol(1, -1.0), 1), (sz.radial_power_symbol(2, -2.0), 2)):
        fam = sz.riesz_family(sig, -1.0)
        pred = (
            -math.sqrt(2 * math.pi) ** d
            * complex(sz.noncommutative_residue(sig))
            / fam.alpha_prime
        )
        sfit = sz.zsweep_regularized_sum(fam)
        ifit = sz.zsweep_regularized_integral(fam)
        worst_fmla = max(worst_fmla, abs(sfit.c_minus1 - pred), abs(ifit.c_minus1 - pred))
        worst_pair = max(worst_pair, abs(sfit.c_minus1 - ifit.c_minus1))
    _report("criterion 7a: sweep residues match the residue formula", worst_fmla, 1e-5)
    _report("criterion 7b: discrete and integral sweep residues agree", worst_pair, 1e-5)


# -- 8 ----------------------------------------------------------------------

def test_criterion_08_epstein_pole():
    q = sz.QuadraticForm.identity(2)
    r = sz.quadratic_zeta(q, 1.0)
    assert r.is_pole
    err_z = abs(r.residue_in_z - 2 * math.pi)
    _report("criterion 8a: pole residue (z variable) is the sphere integral", err_z, 1e-4)
    err_s = abs(float(sz.epstein_oracle(q, 2.0).s_residue_at_d_half) - math.pi)
    _report("criterion 8b: oracle s-residue", err_s, 1e-8)


# -- 9 ----------------------------------------------------------------------

def test_criterion_09_epstein_values_vs_oracle():
    t0 = time.perf_counter()
    qI = sz.QuadraticForm.identity(2)
    qE = sz.QuadraticForm.from_rows([[1, "1/2"], ["1/2", 1]])
    # twelve evaluation points spread over Re(s) in [-2, 3]; s = 1 is the
    # pole and s = 0 is where the hypercube convention departs from the
    # continuation, so neither is a comparison point
    pts = (-1.9, -1.3, -0.45, 0.55, 1.3, 2.6)
    worst = 0.0
    for q in (qI, qE):
        for s in pts:
            got = sz.quadratic_zeta(q, s).value
            want = complex(sz.epstein_oracle(q, s).value)
            worst = max(worst, abs(got - want))
    dt = time.perf_counter() - t0
    _report("criterion 9a: Epstein values match the theta oracle (12 pts)", worst, 1e-5, f"dt={dt:.1f}s")
    assert dt < 60.0
    err = abs(
        sz.quadratic_zeta(qI, 2.0).value
        - complex(4 * sz.riemann_zeta_oracle(2) * sz.dirichlet_beta_oracle(2))
    )
    _report("criterion 9b: factorization 4 zeta(2) beta(2)", err, 1e-7)


# -- 10 ---------------------------------------------------------------------

def test_criterion_10_trivial_zeros():
    worst = 0.0
    for d in (1, 2):
        q = sz.QuadraticForm.identity(d)
        for k in (0, 1, 2):
            worst = max(worst, abs(sz.quadratic_zeta(q, -k).value))
            worst = max(worst, abs(sz.torus_zeta(d, -k).value))
    _report("criterion 10: Z(-k) = 0 and torus zeta(-k) = 0", worst, 1e-5)


# -- 11 ---------------------------------------------------------------------

def test_criterion_11_determinants():
    err1 = abs(sz.torus_zeta_determinant(1) - 4 * math.pi**2)
    _report("criterion 11a: det for d = 1 is 4 pi^2", err1, 1e-5)
    want = math.exp(-complex(sz.epstein_zprime0(sz.QuadraticForm.identity(2))).real)
    err2 = abs(sz.torus_zeta_determinant(2) - want)
    _report("criterion 11b: det for d = 2 matches the oracle continuation", err2, 1e-4)


# -- 12 ---------------------------------------------------------------------

def test_criterion_12_riesz_fp_equals_cutoff_integral():
    worst = 0.0
    cases = (
        sz.radial_power_symbol(1, -1.5),
        sz.radial_power_symbol(1, -2.7),
        sz.radial_power_symbol(2, -1.5),
        sz.radial_power_symbol(2, -2.5),
        sz.quadratic_symbol(sz.QuadraticForm(np.diag([1.0, 4.0])), 0.65),
    )
    for sig in cases:
        fam = sz.riesz_family(sig, -1.0)
        fit = sz.zsweep_regularized_integral(fam)
        worst = max(worst, abs(fit.c0 - sz.cutoff_integral(sig).value))
    _report("criterion 12: Riesz integral fp = cutoff integral", worst, 1e-7)
