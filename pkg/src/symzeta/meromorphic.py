"""Laurent-coefficient recovery near z = 0 for regularized sum/integral maps.

Coefficients come from discrete contour averages over equispaced points on
|z| = radius, recomputed at radius/2; the primary values are the half-radius
ones and the reported aliasing estimate is the observed disagreement between
the two radii.  A c_{-2} probe guards against non-simple poles, which the
sweeps treat as a hard error (the maps handled here have simple poles at
worst, spaced 1/|slope| apart, so radius <= 0.25 isolates z = 0 for
|slope| >= 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import NonSimplePoleError, ParameterError, PreconditionError
from .reg_integral import cutoff_integral_family, sphere_integral
from .reg_sum import EMParams, LatticeSumOptions, cutoff_sum_1d, cutoff_sum_lattice
from .symbols import HolomorphicFamily

__all__ = [
    "LaurentFit",
    "SweepOptions",
    "laurent_fit",
    "zsweep_regularized_sum",
    "zsweep_regularized_integral",
    "compare_regularizations",
    "residue_comparison_prediction",
]


@dataclass
class LaurentFit:
    """Laurent data of F near 0: c_{-1}/z + c_0 + c_1 z + ..."""

    c_minus1: complex
    c0: complex
    higher: Tuple[complex, ...]
    radius: float
    npoints: int
    max_aliasing_estimate: float
    c_minus2: complex = 0.0 + 0.0j
    pole_order_warning: bool = False


def _contour_coefficients(F, radius: float, npoints: int, kmin: int, kmax: int):
    thetas = 2.0 * math.pi * np.arange(npoints) / npoints
    zs = radius * np.exp(1j * thetas)
    vals = np.empty(npoints, dtype=complex)
    for j, z in enumerate(zs):
        try:
            vals[j] = complex(F(z))
        except Exception as exc:
            exc.contour_point = complex(z)
            raise
    coeffs = {}
    for k in range(kmin, kmax + 1):
        coeffs[k] = complex(np.mean(vals * zs ** (-k)))
    return coeffs


def laurent_fit(
    F: Callable[[complex], complex],
    radius: float = 0.25,
    npoints: int = 16,
    n_higher: int = 3,
) -> LaurentFit:
    """Discrete contour averages for c_{-2} .. c_{n_higher}.

    F must be finite on both circles |z| = radius and |z| = radius/2 (pole
    only at the center).  The half-radius coefficients are returned; the
    aliasing estimate is the maximum disagreement with the full-radius ones.
    """
    if npoints < 8 or npoints & (npoints - 1):
        raise ParameterError("npoints must be a power of 2, at least 8")
    if radius <= 0:
        raise ParameterError("radius must be positive")
    big = _contour_coefficients(F, radius, npoints, -2, n_higher)
    small = _contour_coefficients(F, radius / 2.0, npoints, -2, n_higher)
    alias = max(abs(big[k] - small[k]) for k in range(-2, n_higher + 1))
    scale = max(1.0, abs(small[-1]), abs(small[0]))
    warn = abs(small[-2]) > 1e-6 * scale
    return LaurentFit(
        c_minus1=small[-1],
        c0=small[0],
        higher=tuple(small[k] for k in range(1, n_higher + 1)),
        radius=radius / 2.0,
        npoints=npoints,
        max_aliasing_estimate=alias,
        c_minus2=small[-2],
        pole_order_warning=warn,
    )


@dataclass
class SweepOptions:
    """Contour and engine configuration for the z-sweeps."""

    radius: float = 0.25
    npoints: int = 16
    engine: str = "auto"  # auto -> em for d = 1, lattice otherwise
    lattice: LatticeSumOptions = field(default_factory=LatticeSumOptions)
    em: EMParams = field(default_factory=EMParams)
    n_higher: int = 3


def _sum_map(family: HolomorphicFamily, opts: SweepOptions):
    d = family.base.dimension
    engine = opts.engine
    if engine == "auto":
        engine = "em" if d == 1 else "lattice"
    if engine == "em":
        if d != 1:
            raise ParameterError("the Euler-MacLaurin engine is 1-d only")
        return lambda z: cutoff_sum_1d(family.symbol_at(z), opts.em)
    if engine == "lattice":
        return lambda z: cutoff_sum_lattice(family.symbol_at(z), opts.lattice).constant
    raise ParameterError(f"unknown sweep engine {engine!r}")


def zsweep_regularized_sum(
    family: HolomorphicFamily, opts: Optional[SweepOptions] = None
) -> LaurentFit:
    """Laurent data of z -> regularized lattice sum of sigma(z).

    c_minus1 is the z-residue (proportional to the noncommutative residue of
    the base symbol), c0 the regularized sum attached to the family.
    """
    opts = opts or SweepOptions()
    if family.base.dimension > 3:
        raise PreconditionError("sum sweeps support d <= 3")
    fit = laurent_fit(_sum_map(family, opts), opts.radius, opts.npoints, opts.n_higher)
    if fit.pole_order_warning:
        raise NonSimplePoleError(
            "sum sweep detected a pole of order > 1 at z = 0 "
            f"(|c_-2| = {abs(fit.c_minus2):.3e})",
            fit=fit,
        )
    return fit


def zsweep_regularized_integral(
    family: HolomorphicFamily, opts: Optional[SweepOptions] = None
) -> LaurentFit:
    """Laurent data of z -> cut-off regularized integral of sigma(z)."""
    opts = opts or SweepOptions()
    fit = laurent_fit(
        lambda z: cutoff_integral_family(family, z).value,
        opts.radius,
        opts.npoints,
        opts.n_higher,
    )
    if fit.pole_order_warning:
        raise NonSimplePoleError(
            "integral sweep detected a pole of order > 1 at z = 0 "
            f"(|c_-2| = {abs(fit.c_minus2):.3e})",
            fit=fit,
        )
    return fit


def _check_comparable(fam1: HolomorphicFamily, fam2: HolomorphicFamily):
    if fam1.base is not fam2.base:
        same = (
            fam1.base.dimension == fam2.base.dimension
            and abs(complex(fam1.base.order) - complex(fam2.base.order)) < 1e-12
        )
        if not same:
            raise PreconditionError("families must share the base symbol")
    if abs(fam1.slope - fam2.slope) > 1e-12:
        raise PreconditionError("families must have the same affine order map")


def compare_regularizations(
    fam1: HolomorphicFamily,
    fam2: HolomorphicFamily,
    opts: Optional[SweepOptions] = None,
    target: str = "sum",
) -> complex:
    """c0(fam1) - c0(fam2) for two same-order regularizations.

    Equals -(2 pi)^(d/2) res(sigma_1'(0) - sigma_2'(0)) / alpha'(0); in
    particular zero whenever both families fix the symbol on the unit sphere
    (every exponent-shift family does).
    """
    _check_comparable(fam1, fam2)
    opts = opts or SweepOptions()
    if target == "sum":
        f1 = zsweep_regularized_sum(fam1, opts)
        f2 = zsweep_regularized_sum(fam2, opts)
    elif target == "integral":
        f1 = zsweep_regularized_integral(fam1, opts)
        f2 = zsweep_regularized_integral(fam2, opts)
    else:
        raise ParameterError("target must be 'sum' or 'integral'")
    return f1.c0 - f2.c0


def residue_comparison_prediction(
    fam1: HolomorphicFamily, fam2: HolomorphicFamily
) -> complex:
    """-(2 pi)^(d/2)/alpha'(0) times the residue of sigma_1'(0) - sigma_2'(0).

    The residue of the difference is evaluated as a sphere integral of the
    z-derivatives at z = 0 restricted to |x| = 1 (the only log-free
    contribution a degree-(-d) part can make there).
    """
    _check_comparable(fam1, fam2)
    d = fam1.base.dimension
    diff = lambda omega: fam1.z_derivative_at_zero(omega) - fam2.z_derivative_at_zero(omega)
    res = sphere_integral(diff, d) / math.sqrt(2.0 * math.pi) ** d
    return -math.sqrt(2.0 * math.pi) ** d * res / fam1.alpha_prime
