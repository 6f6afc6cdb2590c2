"""Constant-coefficient classical symbols on R^d and holomorphic families.

A classical symbol here is a finite list of positively homogeneous components
of degrees a, a-1, ..., a-J glued with a fixed smooth cutoff that vanishes
near the origin, plus an optional remainder with declared decay.  All types
are immutable after construction and evaluation is pure, so instances are
safe to share between threads.

The cutoff bridge is pinned to the analytic ramp
psi(u) = e^(-1/u) / (e^(-1/u) + e^(-1/(1-u))) rescaled to [r0, r1].  Fixing
one concrete bridge makes every downstream quadrature bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatchError, DomainError, ParameterError

__all__ = [
    "CutoffFunction",
    "HomogeneousComponent",
    "ClassicalSymbol",
    "QuadraticForm",
    "HolomorphicFamily",
    "Remainder",
    "RadialProfile",
    "QuadraticPowerProfile",
    "CallableProfile",
    "falling_factorial",
    "evaluate",
    "translate",
    "derivative_1d",
    "riesz_family",
    "quadratic_symbol",
    "radial_power_symbol",
]

_INT_TOL = 1e-9


def falling_factorial(beta: complex, k: int) -> complex:
    """beta (beta-1) ... (beta-k+1); equals 1 for k = 0."""
    out = 1.0 + 0.0j
    for i in range(k):
        out *= beta - i
    return out


def is_near_integer(z: complex, tol: float = _INT_TOL) -> bool:
    return abs(z.imag) < tol and abs(z.real - round(z.real)) < tol


# ---------------------------------------------------------------------------
# cutoff
# ---------------------------------------------------------------------------

def _bridge(u):
    """Smooth monotone ramp [0,1] -> [0,1], flat to all orders at both ends."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    lo = u <= 0.0
    hi = u >= 1.0
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    um = u[mid]
    a = np.exp(-1.0 / um)
    b = np.exp(-1.0 / (1.0 - um))
    out[mid] = a / (a + b)
    return out


@dataclass(frozen=True)
class CutoffFunction:
    """Radial cutoff: 0 on [0, r0], 1 on [r1, inf), smooth bridge between."""

    r0: float = 0.5
    r1: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.r0 < self.r1):
            raise ParameterError("cutoff needs 0 < r0 < r1")

    def radial(self, r):
        """chi as a function of the radius; accepts scalars or arrays."""
        r = np.asarray(r, dtype=float)
        return _bridge((r - self.r0) / (self.r1 - self.r0))

    def __call__(self, x):
        pts, squeeze = _as_points(np.asarray(x, dtype=float))
        vals = self.radial(np.linalg.norm(pts, axis=-1))
        return float(vals[0]) if squeeze else vals

    def radial_mp(self, r):
        """chi at an mpmath radius (used by high-precision radial moments)."""
        import mpmath as mp

        u = (mp.mpf(r) - self.r0) / (self.r1 - self.r0)
        if u <= 0:
            return mp.mpf(0)
        if u >= 1:
            return mp.mpf(1)
        a = mp.e ** (-1 / u)
        b = mp.e ** (-1 / (1 - u))
        return a / (a + b)


def _as_points(x, dimension: Optional[int] = None):
    """Normalize input to an (M, d) float array; report if input was a single point."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
        squeeze = True
    elif arr.ndim == 1:
        if dimension is not None and dimension == 1 and arr.shape[0] != 1:
            # a batch of 1-d points
            arr = arr.reshape(-1, 1)
            squeeze = False
        else:
            arr = arr.reshape(1, -1)
            squeeze = True
    else:
        squeeze = False
    if dimension is not None and arr.shape[-1] != dimension:
        raise DimensionMismatchError(
            f"points have dimension {arr.shape[-1]}, symbol has {dimension}"
        )
    return arr, squeeze


# ---------------------------------------------------------------------------
# angular profiles
# ---------------------------------------------------------------------------

class RadialProfile:
    """Constant profile on the sphere: component is c * |x|^degree."""

    def __init__(self, coefficient: complex = 1.0):
        self.coefficient = complex(coefficient)

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        return np.full(omega.shape[0], self.coefficient, dtype=complex)


class QuadraticPowerProfile:
    """Profile omega -> q(omega)^power for a positive-definite form q."""

    def __init__(self, form: "QuadraticForm", power: complex):
        self.form = form
        self.power = complex(power)

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        return np.power(self.form(omega).astype(complex), self.power)


class CallableProfile:
    """Wrap a plain callable on unit vectors (shape (M, d) -> complex array)."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray]):
        self.fn = fn

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(omega), dtype=complex)


@dataclass(frozen=True)
class HomogeneousComponent:
    """Positively homogeneous piece: value(x) = |x|^degree * profile(x/|x|)."""

    degree: complex
    angular_profile: Callable[[np.ndarray], np.ndarray]

    def evaluate(self, points: np.ndarray, dtype=complex) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        r = np.linalg.norm(pts, axis=-1)
        if np.any(r == 0):
            raise DomainError("homogeneous component undefined at the origin")
        prof = np.asarray(self.angular_profile(pts / r[..., None]), dtype=complex)
        return np.power(r.astype(dtype), complex(self.degree)) * prof


@dataclass(frozen=True)
class Remainder:
    """Tail evaluator with declared decay: |rem(x)| <= C (1 + |x|)^decay_exponent."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    decay_exponent: float

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.evaluator(points), dtype=complex)


# ---------------------------------------------------------------------------
# classical symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalSymbol:
    """Finite classical expansion chi * sum_j sigma_{a-j} plus remainder."""

    dimension: int
    order: complex
    components: Tuple[HomogeneousComponent, ...]
    cutoff: CutoffFunction = field(default_factory=CutoffFunction)
    remainder: Optional[Remainder] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ParameterError("dimension must be >= 1")
        object.__setattr__(self, "order", complex(self.order))
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if comps:
            if abs(complex(comps[0].degree) - self.order) > _INT_TOL:
                raise ParameterError("leading component degree must equal the order")
            for prev, nxt in zip(comps, comps[1:]):
                if abs(complex(prev.degree) - complex(nxt.degree) - 1.0) > _INT_TOL:
                    raise ParameterError("component degrees must decrease by exactly 1")
        if self.remainder is not None:
            # components cover degrees a .. a-(depth-1); the tail must sit
            # strictly below them: |rem| <= C (1+|x|)^(Re(a) - depth)
            depth = len(comps)
            if self.remainder.decay_exponent > self.order.real - depth + _INT_TOL:
                raise ParameterError(
                    "remainder decay exponent inconsistent with component depth"
                )

    @property
    def is_integer_order(self) -> bool:
        return is_near_integer(self.order)

    @property
    def degrees(self) -> Tuple[complex, ...]:
        return tuple(complex(c.degree) for c in self.components)

    def evaluate(self, x, dtype=complex):
        """Symbol value; exactly 0 at the origin when no remainder is present."""
        pts, squeeze = _as_points(x, self.dimension)
        r = np.linalg.norm(pts, axis=-1)
        out = np.zeros(pts.shape[0], dtype=dtype)
        mask = r > self.cutoff.r0  # chi vanishes at and below r0
        if np.any(mask):
            chi = self.cutoff.radial(r[mask]).astype(dtype)
            sub = pts[mask]
            rm = r[mask]
            omega = sub / rm[:, None]
            acc = np.zeros(sub.shape[0], dtype=dtype)
            for comp in self.components:
                prof = np.asarray(comp.angular_profile(omega), dtype=dtype)
                acc += np.power(rm.astype(dtype), complex(comp.degree)) * prof
            out[mask] = chi * acc
        if self.remainder is not None:
            out = out + self.remainder(pts).astype(dtype)
        return out[0] if squeeze else out

    def __call__(self, x):
        return self.evaluate(x)


def evaluate(sigma: ClassicalSymbol, x):
    """Module-level alias for ClassicalSymbol.evaluate."""
    return sigma.evaluate(x)


class TranslatedSymbol:
    """Pointwise translate x -> sigma(x + p); not in classical form."""

    is_classical = False

    def __init__(self, base: ClassicalSymbol, shift):
        shift = np.atleast_1d(np.asarray(shift, dtype=float))
        if shift.shape[0] != base.dimension:
            raise DimensionMismatchError("translation vector dimension mismatch")
        self.base = base
        self.shift = shift
        self.dimension = base.dimension

    def evaluate(self, x):
        pts, squeeze = _as_points(x, self.dimension)
        vals = self.base.evaluate(pts + self.shift[None, :])
        return vals if not squeeze else vals

    def __call__(self, x):
        return self.evaluate(x)


def translate(sigma: ClassicalSymbol, p) -> TranslatedSymbol:
    """t_p sigma, the evaluator x -> sigma(x + p)."""
    return TranslatedSymbol(sigma, p)


# ---------------------------------------------------------------------------
# 1-d derivatives
# ---------------------------------------------------------------------------

def _fd_weights(xs: np.ndarray, m: int) -> np.ndarray:
    """Finite-difference weights for the m-th derivative at 0 on nodes xs."""
    n = len(xs)
    A = np.vander(xs, n, increasing=True).T  # A[i, j] = xs[j]^i
    b = np.zeros(n)
    b[m] = math.factorial(m)
    return np.linalg.solve(A, b)


def _fd_derivative(fn, x: float, k: int, scale: float = 1.0) -> complex:
    """k-th derivative by central differences with one Richardson step."""
    npts = k + 1 + (k % 2) + 4
    offs = np.arange(npts) - (npts - 1) / 2.0

    def estimate(h):
        xs = offs * h
        w = _fd_weights(xs, k)
        vals = np.array([fn(x + xi) for xi in xs], dtype=complex)
        return np.dot(w, vals)

    h0 = scale * (np.finfo(float).eps ** (1.0 / (npts + 1))) * max(1.0, abs(x))
    e1, e2 = estimate(h0), estimate(h0 / 2.0)
    p = npts - k  # order of the stencil
    return (2**p * e2 - e1) / (2**p - 1)


class Derivative1D:
    """Exact k-th derivative of a 1-d symbol on |x| >= r1.

    Homogeneous part via falling-factorial coefficients; remainder part (when
    present) via central finite differences with Richardson refinement.
    """

    def __init__(self, base: ClassicalSymbol, k: int):
        if base.dimension != 1:
            raise DimensionMismatchError("derivative_1d needs a 1-d symbol")
        if k < 1:
            raise ParameterError("derivative order must be >= 1")
        self.base = base
        self.k = k
        self.dimension = 1
        plus = np.array([[1.0]])
        minus = np.array([[-1.0]])
        self._branch = []
        for comp in base.components:
            cp = complex(np.asarray(comp.angular_profile(plus), dtype=complex)[0])
            cm = complex(np.asarray(comp.angular_profile(minus), dtype=complex)[0])
            self._branch.append((complex(comp.degree), cp, cm))

    def evaluate(self, x: float) -> complex:
        ax = abs(float(x))
        if ax < self.base.cutoff.r1:
            raise DomainError("derivative evaluation requires |x| >= r1")
        s = 1.0 if x > 0 else -1.0
        out = 0.0 + 0.0j
        for beta, cp, cm in self._branch:
            c = cp if s > 0 else cm
            out += c * falling_factorial(beta, self.k) * ax ** (beta - self.k) * s**self.k
        if self.base.remainder is not None:
            out += _fd_derivative(
                lambda t: complex(self.base.remainder(np.array([[t]]))[0]),
                float(x),
                self.k,
            )
        return out

    def __call__(self, x):
        return self.evaluate(x)

    def as_symbol(self) -> ClassicalSymbol:
        """Assemble the homogeneous part as a symbol (remainder dropped)."""
        comps = []
        k = self.k
        for beta, cp, cm in self._branch:
            fac = falling_factorial(beta, k)
            vp, vm = cp * fac, cm * fac * (-1.0) ** k

            def prof(omega, vp=vp, vm=vm):
                return np.where(omega[:, 0] > 0, vp, vm).astype(complex)

            comps.append(HomogeneousComponent(beta - k, CallableProfile(prof)))
        return ClassicalSymbol(1, self.base.order - k, tuple(comps), self.base.cutoff)


def derivative_1d(sigma: ClassicalSymbol, k: int) -> Derivative1D:
    return Derivative1D(sigma, k)


# ---------------------------------------------------------------------------
# quadratic forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric positive-definite form q(x) = x^T A x.

    Positive definiteness is checked by Cholesky factorization at
    construction.  When all matrix entries are exact rationals with
    a_ii and 2 a_ij integral, lattice values q(n) are rationals with a
    fixed denominator, which the exact summation paths exploit.
    """

    matrix: np.ndarray
    exact: Optional[Tuple[Tuple[Fraction, ...], ...]] = None

    def __post_init__(self):
        A = np.asarray(self.matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ParameterError("quadratic form needs a square matrix")
        if not np.allclose(A, A.T, atol=1e-13):
            raise ParameterError("quadratic form matrix must be symmetric")
        try:
            np.linalg.cholesky(A)
        except np.linalg.LinAlgError as exc:
            raise ParameterError("quadratic form must be positive definite") from exc
        object.__setattr__(self, "matrix", A)
        if self.exact is None:
            fr = tuple(
                tuple(Fraction(x).limit_denominator(10**12) for x in row) for row in A
            )
            if all(
                abs(float(fr[i][j]) - A[i, j]) < 1e-14
                for i in range(A.shape[0])
                for j in range(A.shape[1])
            ):
                object.__setattr__(self, "exact", fr)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QuadraticForm":
        fr = tuple(tuple(Fraction(str(x)) if isinstance(x, str) else Fraction(x) for x in row) for row in rows)
        A = np.array([[float(x) for x in row] for row in fr], dtype=float)
        return cls(A, exact=fr)

    @classmethod
    def identity(cls, d: int) -> "QuadraticForm":
        return cls(np.eye(d))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        vals = np.einsum("mi,ij,mj->m", pts, self.matrix, pts)
        return float(vals[0]) if single else vals

    def value_exact(self, n: Sequence[int]) -> Fraction:
        if self.exact is None:
            raise ParameterError("form matrix is not exactly rational")
        acc = Fraction(0)
        for i, ni in enumerate(n):
            for j, nj in enumerate(n):
                acc += self.exact[i][j] * ni * nj
        return acc

    @property
    def lattice_denominator(self) -> Optional[int]:
        """Smallest D with D*q(n) integral for integer n, if rational."""
        if self.exact is None:
            return None
        D = 1
        d = self.dimension
        for i in range(d):
            D = D * self.exact[i][i].denominator // math.gcd(D, self.exact[i][i].denominator)
        for i in range(d):
            for j in range(i + 1, d):
                two = 2 * self.exact[i][j]
                D = D * two.denominator // math.gcd(D, two.denominator)
        return D

    def dual(self) -> "QuadraticForm":
        """Form with the inverse matrix (appears in the theta transform)."""
        return QuadraticForm(np.linalg.inv(self.matrix))

    def eigen_range(self) -> Tuple[float, float]:
        w = np.linalg.eigvalsh(self.matrix)
        return float(w[0]), float(w[-1])


def quadratic_symbol(
    q: QuadraticForm, s: complex, cutoff: Optional[CutoffFunction] = None
) -> ClassicalSymbol:
    """chi(x) q(x)^(-s): single homogeneous component of degree -2s."""
    cutoff = cutoff or CutoffFunction()
    comp = HomogeneousComponent(-2 * complex(s), QuadraticPowerProfile(q, -complex(s)))
    return ClassicalSymbol(q.dimension, -2 * complex(s), (comp,), cutoff)


def radial_power_symbol(
    dimension: int, a: complex, cutoff: Optional[CutoffFunction] = None,
    coefficient: complex = 1.0,
) -> ClassicalSymbol:
    """chi(x) c |x|^a: the basic radial test symbol."""
    cutoff = cutoff or CutoffFunction()
    comp = HomogeneousComponent(complex(a), RadialProfile(coefficient))
    return ClassicalSymbol(dimension, complex(a), (comp,), cutoff)


# ---------------------------------------------------------------------------
# holomorphic (Riesz-type) families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HolomorphicFamily:
    """z -> (1 - chi_g) sigma + chi_g sigma |x|^(b z), affine order a + b z.

    The gate cutoff chi_g defaults to the base symbol's cutoff; its r1 must
    not exceed 1 so that lattice points (|n| >= 1) always see the plain
    exponent shift.
    """

    base: ClassicalSymbol
    slope: float
    gate: Optional[CutoffFunction] = None

    def __post_init__(self):
        if self.slope == 0:
            raise ParameterError("holomorphic family needs a non-constant affine order")
        gate = self.gate or self.base.cutoff
        if gate.r1 > 1.0 + 1e-12:
            raise ParameterError("gate cutoff must saturate at radius <= 1")
        object.__setattr__(self, "gate", gate)

    def order(self, z: complex) -> complex:
        return self.base.order + self.slope * z

    @property
    def alpha_prime(self) -> float:
        return self.slope

    def symbol_at(self, z: complex) -> ClassicalSymbol:
        """Shifted-degree symbol; exact wherever the gate is saturated (|x| >= r1)."""
        dz = self.slope * complex(z)
        comps = tuple(
            HomogeneousComponent(complex(c.degree) + dz, c.angular_profile)
            for c in self.base.components
        )
        rem = None
        if self.base.remainder is not None:
            base_rem = self.base.remainder
            gate = self.gate

            def shifted(pts, base_rem=base_rem, gate=gate, dz=dz):
                pts = np.asarray(pts, dtype=float)
                r = np.linalg.norm(pts, axis=-1)
                g = gate.radial(r)
                fac = (1 - g) + g * np.power(
                    np.where(r > 0, r, 1.0).astype(complex), dz
                )
                return base_rem(pts) * fac

            rem = Remainder(shifted, base_rem.decay_exponent + dz.real)
        return ClassicalSymbol(
            self.base.dimension, self.base.order + dz, comps, self.base.cutoff, rem
        )

    def evaluate(self, z: complex, x):
        pts, squeeze = _as_points(x, self.base.dimension)
        vals = self.base.evaluate(pts)
        r = np.linalg.norm(pts, axis=-1)
        g = self.gate.radial(r)
        fac = (1 - g) + g * np.power(
            np.where(r > 0, r, 1.0).astype(complex), self.slope * complex(z)
        )
        out = vals * fac
        return out[0] if squeeze else out

    def z_derivative_at_zero(self, x):
        """d/dz sigma(z)(x) at z = 0: chi_g(x) sigma(x) b log|x|."""
        pts, squeeze = _as_points(x, self.base.dimension)
        vals = self.base.evaluate(pts)
        r = np.linalg.norm(pts, axis=-1)
        g = self.gate.radial(r)
        out = vals * g * self.slope * np.log(np.where(r > 0, r, 1.0))
        return out[0] if squeeze else out


def riesz_family(
    sigma: ClassicalSymbol, b: float, gate: Optional[CutoffFunction] = None
) -> HolomorphicFamily:
    """Exponent-shift family with sigma(0) = sigma and order a + b z."""
    if b == 0:
        raise ParameterError("Riesz family requires a nonzero slope")
    return HolomorphicFamily(sigma, float(b), gate)
