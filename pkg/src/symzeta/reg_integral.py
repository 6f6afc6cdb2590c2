"""Cut-off regularized integrals, sphere quadrature, and the residue.

The regularized integral of a classical symbol is assembled from three
pieces: the convergent integral of the remainder, the unit-ball integrals of
the cut-off homogeneous components, and one sphere integral per component
divided by (degree + d).  Components of degree exactly -d contribute no such
sphere term; they feed the log coefficient instead, which is flagged.

Sphere integration uses the trapezoid rule for d = 2 (spectrally accurate on
periodic smooth integrands) and tensor Gauss-Legendre rules for d = 3, 4,
with adaptive node doubling.  d = 1 spheres are the two-point set {-1, +1}
with counting measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict

import numpy as np
import mpmath as mp
from scipy import integrate as _scipy_integrate

from .errors import AccuracyError, ParameterError, PreconditionError
from .symbols import ClassicalSymbol, CutoffFunction, HolomorphicFamily

__all__ = [
    "SphereQuadrature",
    "RegIntegralResult",
    "sphere_quadrature",
    "sphere_integral",
    "noncommutative_residue",
    "cutoff_integral",
    "cutoff_integral_family",
    "ball_integral_numeric",
    "supball_integral_numeric",
    "polytope_ball_correction",
]

_CONFLUENCE_TOL = 1e-9


def sphere_surface(d: int) -> float:
    """Surface measure of the unit sphere S^(d-1); 2 points for d = 1."""
    if d == 1:
        return 2.0
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@lru_cache(maxsize=None)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@dataclass(frozen=True)
class SphereQuadrature:
    """Nodes and positive weights integrating over S^(d-1), 2 <= d <= 4."""

    dimension: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> complex:
        vals = np.asarray(f(self.nodes), dtype=complex)
        return complex(np.dot(self.weights, vals))


@lru_cache(maxsize=64)
def sphere_quadrature(d: int, level: int = 0) -> SphereQuadrature:
    """Build the level-th refinement of the tensor rule on S^(d-1)."""
    if d == 2:
        m = 16 * 2**level
        theta = 2.0 * math.pi * np.arange(m) / m
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        weights = np.full(m, 2.0 * math.pi / m)
        return SphereQuadrature(2, nodes, weights)
    if d == 3:
        nu = 8 * 2**level
        u, wu = _leggauss(nu)
        m = 2 * nu
        theta = 2.0 * math.pi * np.arange(m) / m
        st = np.sqrt(1.0 - u**2)
        nodes = np.empty((nu * m, 3))
        weights = np.empty(nu * m)
        k = 0
        for i in range(nu):
            nodes[k : k + m, 0] = st[i] * np.cos(theta)
            nodes[k : k + m, 1] = st[i] * np.sin(theta)
            nodes[k : k + m, 2] = u[i]
            weights[k : k + m] = wu[i] * (2.0 * math.pi / m)
            k += m
        return SphereQuadrature(3, nodes, weights)
    if d == 4:
        npsi = 8 * 2**level
        x, wx = _leggauss(npsi)
        psi = 0.5 * math.pi * (x + 1.0)
        wpsi = 0.5 * math.pi * wx * np.sin(psi) ** 2
        inner = sphere_quadrature(3, level)
        nn = inner.nodes.shape[0]
        nodes = np.empty((npsi * nn, 4))
        weights = np.empty(npsi * nn)
        k = 0
        for i in range(npsi):
            nodes[k : k + nn, 0] = np.cos(psi[i])
            nodes[k : k + nn, 1:] = np.sin(psi[i]) * inner.nodes
            weights[k : k + nn] = wpsi[i] * inner.weights
            k += nn
        return SphereQuadrature(4, nodes, weights)
    raise ParameterError("sphere quadrature supports 2 <= d <= 4")


def sphere_integral(
    f: Callable[[np.ndarray], np.ndarray],
    d: int,
    tol: float = 1e-12,
    max_level: int = 7,
) -> complex:
    """Integral of a smooth evaluator over S^(d-1) with adaptive doubling."""
    if d == 1:
        vals = np.asarray(f(np.array([[1.0], [-1.0]])), dtype=complex)
        return complex(vals[0] + vals[1])
    if d not in (2, 3, 4):
        raise ParameterError("sphere_integral supports 1 <= d <= 4")
    prev = sphere_quadrature(d, 0).integrate(f)
    for level in range(1, max_level + 1):
        cur = sphere_quadrature(d, level).integrate(f)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise AccuracyError(
        "sphere integral did not reach requested tolerance", estimate=prev
    )


def noncommutative_residue(sigma: ClassicalSymbol, tol: float = 1e-12) -> complex:
    """(2 pi)^(-d/2) times the sphere integral of the degree-(-d) component.

    Exactly zero when no component of degree -d is present (in particular for
    all non-integer-order symbols).
    """
    d = sigma.dimension
    for comp in sigma.components:
        if abs(complex(comp.degree) + d) < _CONFLUENCE_TOL:
            val = sphere_integral(comp.angular_profile, d, tol=tol)
            return val / math.sqrt(2.0 * math.pi) ** d
    return 0.0 + 0.0j


# ---------------------------------------------------------------------------
# radial moments of the cutoff (high precision)
# ---------------------------------------------------------------------------

def _chi_radial_moment(cutoff: CutoffFunction, exponent: complex, dps: int = 30) -> complex:
    """integral_0^1 chi(r) r^exponent dr, exact to ~10^-dps."""
    with mp.workdps(dps):
        e = mp.mpc(exponent)

        def integrand(r):
            return cutoff.radial_mp(r) * mp.power(r, e)

        val = mp.quad(integrand, [cutoff.r0, min(cutoff.r1, 1.0), 1.0])
        return complex(val)


def _chi_radial_moment_gated(
    cutoff: CutoffFunction,
    gate: CutoffFunction,
    exponent: complex,
    shift: complex,
    dps: int = 30,
) -> complex:
    """integral_0^1 chi(r) [(1-g(r)) + g(r) r^shift] r^exponent dr."""
    with mp.workdps(dps):
        e = mp.mpc(exponent)
        sh = mp.mpc(shift)

        def integrand(r):
            g = gate.radial_mp(r)
            fac = (1 - g) + g * mp.power(r, sh)
            return cutoff.radial_mp(r) * fac * mp.power(r, e)

        pts = sorted({cutoff.r0, cutoff.r1, gate.r0, gate.r1, 1.0})
        pts = [p for p in pts if cutoff.r0 <= p <= 1.0]
        val = mp.quad(integrand, pts)
        return complex(val)


# ---------------------------------------------------------------------------
# cut-off regularized integral
# ---------------------------------------------------------------------------

@dataclass
class RegIntegralResult:
    """Value plus the per-piece breakdown of the constant-term assembly."""

    value: complex
    breakdown: Dict[str, object] = field(default_factory=dict)
    flags: Dict[str, bool] = field(default_factory=dict)


def _remainder_integral(sigma: ClassicalSymbol, tol: float) -> complex:
    """Convergent integral of the remainder over R^d, with a decay tail bound."""
    rem = sigma.remainder
    d = sigma.dimension
    rho = rem.decay_exponent
    if rho >= -d:
        raise PreconditionError(
            "remainder decay must beat -d for a convergent integral; "
            "include more components"
        )

    if d == 1:
        def fre(x):
            return float(np.real(rem(np.array([[x]]))[0]))

        def fim(x):
            return float(np.imag(rem(np.array([[x]]))[0]))
    else:
        def radial_slice(r):
            if r == 0.0:
                pts = np.zeros((1, d))
                return complex(rem(pts)[0]) * 0.0
            return r ** (d - 1) * sphere_integral(
                lambda om: rem(r * om), d, tol=max(tol * 1e-2, 1e-13)
            )

        def fre(r):
            return radial_slice(r).real

        def fim(r):
            return radial_slice(r).imag

    # cut radius from the declared decay; constant estimated on samples
    probe_r = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    if d == 1:
        samples = np.abs(rem(probe_r[:, None]))
    else:
        samples = np.array(
            [np.max(np.abs(rem(r * sphere_quadrature(d, 0).nodes))) for r in probe_r]
        )
    c_est = float(np.max(samples / (1.0 + probe_r) ** rho)) if np.any(samples > 0) else 0.0
    surf = sphere_surface(d)
    r_cut = 16.0
    if c_est > 0:
        # tail <= C * surf * integral_R^inf (1+r)^rho r^(d-1) dr
        while c_est * surf * (1.0 + r_cut) ** (rho + d) / abs(rho + d) > 0.1 * tol:
            r_cut *= 2.0
            if r_cut > 1e9:
                raise AccuracyError("remainder tail bound did not close")
    lo = -r_cut if d == 1 else 0.0
    re_val, _ = _scipy_integrate.quad(fre, lo, r_cut, limit=400, epsabs=0.1 * tol, epsrel=1e-12)
    im_val, _ = _scipy_integrate.quad(fim, lo, r_cut, limit=400, epsabs=0.1 * tol, epsrel=1e-12)
    return complex(re_val, im_val)


def cutoff_integral(
    sigma: ClassicalSymbol, tol: float = 1e-11, dps: int = 30
) -> RegIntegralResult:
    """Constant term of R -> integral over B(0, R) of the symbol.

    Per component of degree b: the unit-ball integral of chi * component plus
    the sphere term -S_b / (b + d); a component with b + d = 0 contributes no
    sphere term and raises the `had_log_obstruction` flag (its log
    coefficient is the residue, up to normalization).
    """
    d = sigma.dimension
    if d > 4:
        raise PreconditionError("cutoff_integral supports d <= 4")
    breakdown: Dict[str, object] = {"ball": {}, "sphere": {}, "remainder": 0.0 + 0.0j}
    flags = {"had_log_obstruction": False}
    total = 0.0 + 0.0j
    for comp in sigma.components:
        b = complex(comp.degree)
        S = sphere_integral(comp.angular_profile, d, tol=max(tol * 1e-2, 1e-13))
        ball = _chi_radial_moment(sigma.cutoff, b + d - 1, dps=dps) * S
        breakdown["ball"][b] = ball
        total += ball
        if abs(b + d) < _CONFLUENCE_TOL:
            flags["had_log_obstruction"] = True
            breakdown["sphere"][b] = None
        else:
            term = -S / (b + d)
            breakdown["sphere"][b] = term
            total += term
    if sigma.remainder is not None:
        rpart = _remainder_integral(sigma, tol)
        breakdown["remainder"] = rpart
        total += rpart
    return RegIntegralResult(total, breakdown, flags)


def cutoff_integral_family(
    family: HolomorphicFamily, z: complex, tol: float = 1e-11, dps: int = 30
) -> RegIntegralResult:
    """Cut-off regularized integral of the family member sigma(z).

    Outside the gate's saturation radius the member is the plain exponent
    shift, handled by shifted sphere terms; inside B(0,1) the gated factor
    (1-g) + g r^(bz) enters the radial moments explicitly.
    """
    sigma = family.base
    d = sigma.dimension
    dz = family.slope * complex(z)
    breakdown: Dict[str, object] = {"ball": {}, "sphere": {}, "remainder": 0.0 + 0.0j}
    flags = {"had_log_obstruction": False}
    total = 0.0 + 0.0j
    for comp in sigma.components:
        b = complex(comp.degree)
        S = sphere_integral(comp.angular_profile, d, tol=max(tol * 1e-2, 1e-13))
        ball = (
            _chi_radial_moment_gated(sigma.cutoff, family.gate, b + d - 1, dz, dps=dps)
            * S
        )
        breakdown["ball"][b] = ball
        total += ball
        bz = b + dz
        if abs(bz + d) < _CONFLUENCE_TOL:
            flags["had_log_obstruction"] = True
            breakdown["sphere"][b] = None
        else:
            term = -S / (bz + d)
            breakdown["sphere"][b] = term
            total += term
    if sigma.remainder is not None:
        shifted = family.symbol_at(z)
        rpart = _remainder_integral(shifted, tol)
        breakdown["remainder"] = rpart
        total += rpart
    return RegIntegralResult(total, breakdown, flags)


# ---------------------------------------------------------------------------
# honest finite-region integrals (pointwise quadrature of sigma.evaluate)
# ---------------------------------------------------------------------------

def _quad_complex(f, a, b, tol, points=None):
    kw = dict(limit=400, epsabs=tol, epsrel=1e-13)
    if points is not None:
        pts = [p for p in points if a < p < b]
        if pts:
            kw["points"] = pts
    re_val, _ = _scipy_integrate.quad(lambda x: float(np.real(f(x))), a, b, **kw)
    im_val, _ = _scipy_integrate.quad(lambda x: float(np.imag(f(x))), a, b, **kw)
    return complex(re_val, im_val)


def _gl_panel(fvec, a: float, b: float, n: int) -> complex:
    x, w = _leggauss(n)
    t = 0.5 * (b - a) * x + 0.5 * (a + b)
    vals = np.asarray(fvec(t), dtype=complex)
    return complex(0.5 * (b - a) * np.dot(w, vals))


def _gl_adaptive(fvec, a: float, b: float, tol: float, n0: int = 16, max_doub: int = 7) -> complex:
    prev = _gl_panel(fvec, a, b, n0)
    n = n0
    for _ in range(max_doub):
        n *= 2
        cur = _gl_panel(fvec, a, b, n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise AccuracyError("adaptive Gauss-Legendre did not converge", estimate=prev)


def ball_integral_numeric(sigma: ClassicalSymbol, R: float, tol: float = 1e-9) -> complex:
    """integral of the symbol over the euclidean ball B(0, R), by quadrature.

    Uses only pointwise symbol evaluation (no per-component closed forms), so
    it is an independent check of `cutoff_integral`.
    """
    d = sigma.dimension
    if R <= sigma.cutoff.r1:
        raise ParameterError("ball radius must exceed the cutoff saturation radius")
    c = sigma.cutoff
    if d == 1:
        return _quad_complex(
            lambda x: sigma.evaluate(np.array([[x]]))[0],
            -R,
            R,
            tol,
            points=[-1.0, -c.r1, -c.r0, c.r0, c.r1, 1.0],
        )
    if d > 3:
        raise PreconditionError("generic ball quadrature supports d <= 3")
    inner_tol = max(tol * 1e-3, 1e-13)

    def shell(r: float) -> complex:
        if r <= c.r0:
            return 0.0 + 0.0j
        return r ** (d - 1) * sphere_integral(
            lambda om: sigma.evaluate(r * om), d, tol=inner_tol
        )

    return _quad_complex(
        lambda r: shell(r), 0.0, R, tol, points=[c.r0, c.r1, 1.0]
    )


def _face_vectors(d: int, y: np.ndarray, axis: int, sign: float) -> np.ndarray:
    """Embed (M, d-1) panel coordinates into the face x_axis = sign of the unit cube."""
    m = y.shape[0]
    v = np.empty((m, d))
    cols = [i for i in range(d) if i != axis]
    for j, cidx in enumerate(cols):
        v[:, cidx] = y[:, j]
    v[:, axis] = sign
    return v


def supball_integral_numeric(sigma: ClassicalSymbol, R: float, tol: float = 1e-9) -> complex:
    """integral of the symbol over the sup-norm ball [-R, R]^d, by quadrature.

    Computed as the euclidean-ball integral plus the corner bulge
    sup-ball minus ball, parametrized face by face.
    """
    d = sigma.dimension
    if d == 1:
        return ball_integral_numeric(sigma, R, tol)
    if d > 3:
        raise PreconditionError("sup-ball quadrature supports d <= 3")
    if R <= 1.0:
        raise ParameterError("sup-ball radius must exceed 1")
    base = ball_integral_numeric(sigma, R, tol * 0.5)
    # bulge: t * v(y) with |v(y)| >= t |v| > R, t in (R/|v(y)|, R]
    bulge = 0.0 + 0.0j
    for axis in range(d):
        for sign in (-1.0, 1.0):
            def panel(y2d):
                v = _face_vectors(d, y2d, axis, sign)
                nv = np.linalg.norm(v, axis=1)
                out = np.empty(v.shape[0], dtype=complex)
                for i in range(v.shape[0]):
                    lo = R / nv[i]

                    def fr(ts, vi=v[i]):
                        pts = ts[:, None] * vi[None, :]
                        return sigma.evaluate(pts) * ts ** (d - 1)

                    out[i] = _gl_panel(fr, lo, R, 48)
                return out

            if d == 2:
                bulge += _gl_adaptive(lambda t: panel(t[:, None]), -1.0, 1.0, tol * 0.25)
            else:
                def outer(t1):
                    res = np.empty(len(t1), dtype=complex)
                    for i, a_val in enumerate(t1):
                        res[i] = _gl_adaptive(
                            lambda t2, a_val=a_val: panel(
                                np.column_stack([np.full(len(t2), a_val), t2])
                            ),
                            -1.0,
                            1.0,
                            tol * 0.25,
                        )
                    return res

                bulge += _gl_adaptive(outer, -1.0, 1.0, tol * 0.25)
    return base + bulge


def polytope_ball_correction(
    sigma: ClassicalSymbol, halfwidth: float = 1.0, tol: float = 1e-10
) -> complex:
    """integral over [-1,1]^d minus B(0,1) of the degree-(-d) component.

    This is the constant offset between sup-norm-ball and euclidean-ball
    finite parts for integer-order symbols.  Zero when the symbol has no
    degree-(-d) component.  The cone over each cube face contributes
    integral of comp(v(y)) * log|v(y)| dy, from the scaling of the radial
    integral of an exactly (-d)-homogeneous function.
    """
    d = sigma.dimension
    if d not in (2, 3):
        raise PreconditionError("polytope correction implemented for d in {2, 3}")
    if abs(halfwidth - 1.0) > 1e-12:
        raise ParameterError("only the unit hypercube [-1,1]^d is supported")
    target = None
    for comp in sigma.components:
        if abs(complex(comp.degree) + d) < _CONFLUENCE_TOL:
            target = comp
            break
    if target is None:
        return 0.0 + 0.0j
    total = 0.0 + 0.0j
    for axis in range(d):
        for sign in (-1.0, 1.0):
            def panel(y2d):
                v = _face_vectors(d, y2d, axis, sign)
                nv = np.linalg.norm(v, axis=1)
                vals = target.evaluate(v)
                return vals * np.log(nv)

            if d == 2:
                total += _gl_adaptive(lambda t: panel(t[:, None]), -1.0, 1.0, tol)
            else:
                def outer(t1):
                    res = np.empty(len(t1), dtype=complex)
                    for i, a_val in enumerate(t1):
                        res[i] = _gl_adaptive(
                            lambda t2, a_val=a_val: panel(
                                np.column_stack([np.full(len(t2), a_val), t2])
                            ),
                            -1.0,
                            1.0,
                            tol,
                        )
                    return res

                total += _gl_adaptive(outer, -1.0, 1.0, tol)
    return total
