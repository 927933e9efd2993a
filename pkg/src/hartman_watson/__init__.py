"""Hartman-Watson integral: small-t saddle-point expansion, reference
evaluators, and the small-t density of the time-averaged geometric
Brownian motion."""

from .core import (
    F,
    F_prime,
    F_second,
    G,
    CoreEval,
    ThetaApprox,
    evaluate,
    g2_tilde,
    theta_hat,
    theta_rho1_series,
)
from .errors import ConvergenceError, DomainError, NoRootError, PrecisionLossError
from .gbm import (
    DensityPoint,
    RateEval,
    density_asym,
    density_numeric,
    J_inf_oracle,
    prefactor_g,
    rate_J,
    rate_JBS,
)
from .reference import (
    GerholdResult,
    QuadResult,
    bessel_I0,
    bessel_K0,
    hw_density,
    theta_gerhold,
    theta_numeric,
    theta_tail_coeff,
)
from .saddle import RootConfig, classify, solve_rho_star, solve_u0, solve_x1, solve_y1

__version__ = "0.1.0"
