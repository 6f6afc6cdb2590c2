"""symzeta: regularized sums and integrals of classical symbols on R^d / Z^d,
and the lattice zeta functions built from them."""

from .exactnum import (
    BernoulliTable,
    Rational,
    bernoulli_number,
    bernoulli_poly,
    faulhaber_sum,
    periodic_bernoulli,
)
from .symbols import (
    ClassicalSymbol,
    CutoffFunction,
    HolomorphicFamily,
    HomogeneousComponent,
    QuadraticForm,
    Remainder,
    derivative_1d,
    evaluate,
    quadratic_symbol,
    radial_power_symbol,
    riesz_family,
    translate,
)
from .reg_integral import (
    RegIntegralResult,
    SphereQuadrature,
    ball_integral_numeric,
    cutoff_integral,
    cutoff_integral_family,
    noncommutative_residue,
    polytope_ball_correction,
    sphere_integral,
    sphere_quadrature,
    supball_integral_numeric,
)
from .reg_sum import (
    AsymptoticModel,
    C_constant,
    EMParams,
    FinitePartResult,
    LatticeSumOptions,
    Polynomial,
    cutoff_sum_1d,
    cutoff_sum_lattice,
    em_identity_check,
    finite_part_extract,
    kp_hypercube_polynomial_sum,
    lattice_fp_of_evaluator,
    lattice_ladder_sums,
    lattice_sum_supball,
    polynomial_symbol,
)
from .meromorphic import (
    LaurentFit,
    SweepOptions,
    compare_regularizations,
    laurent_fit,
    residue_comparison_prediction,
    zsweep_regularized_integral,
    zsweep_regularized_sum,
)
from .oracles import (
    OracleConfig,
    dirichlet_beta_oracle,
    epstein_oracle,
    epstein_zprime0,
    hurwitz_zeta_oracle,
    riemann_zeta_oracle,
)
from .zeta import (
    C_of_power,
    ZetaOptions,
    ZetaResult,
    hurwitz_zeta_reg,
    quadratic_zeta,
    quadratic_zeta_residue,
    riemann_zeta_reg,
    torus_zeta,
    torus_zeta_determinant,
)

__version__ = "0.1.0"
