"""Small-t density of the time average of geometric Brownian motion.

For ``A_t = int_0^t exp(2 (B_s + mu s)) ds`` the law of ``A_t / t`` is

    P(A_t/t in da) = exp(-mu^2 t/2) da/a
        * int_0^inf (a rho)^mu exp(-(1 + a^2 rho^2)/(2 a t)) theta(rho/t, t) drho/rho,

and a Laplace expansion of the rho integral around the minimiser of

    H(rho) = (1 + a^2 rho^2)/(2a) - pi^2/2 + F(rho)

gives ``1/sqrt(2 pi t) * g(a, mu) * exp(-J(a)/t) / a``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from ._series import X_MINUS_TANH_R, horner
from .core import F, F_second, G, HALF_PI2, theta_hat
from .errors import ConvergenceError, DomainError, PrecisionLossError
from .reference import theta_numeric
from .saddle import DEFAULT_CONFIG, RootConfig, solve_beta, solve_rho_star, solve_xi

__all__ = [
    "RateBranch",
    "RateEval",
    "DensityPoint",
    "rate_J",
    "rate_JBS",
    "H",
    "J_inf_oracle",
    "prefactor_g",
    "density_asym",
    "density_numeric",
]

_SERIES_X2 = 0.5
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


class RateBranch(enum.Enum):
    AGE1 = "AGe1"
    ALE1 = "ALe1"


@dataclass(frozen=True)
class RateEval:
    a: float
    J: float
    rho_star: float
    H_dd: float
    branch: RateBranch


@dataclass(frozen=True)
class DensityPoint:
    a: float
    mu: float
    t: float
    log_density: float
    g_val: float
    J_val: float
    err_rel_bound: float

    @property
    def density(self) -> float:
        return math.exp(self.log_density)


def _x_minus_tanh(x):
    if x * x <= _SERIES_X2:
        return x**3 * horner(X_MINUS_TANH_R, x * x)
    return x - math.tanh(x)


def _tan_minus_x(x):
    if x * x <= _SERIES_X2:
        return x**3 * horner(X_MINUS_TANH_R, -x * x)
    return math.tan(x) - x


def _check_a(a):
    if not (a > 0 and math.isfinite(a)):
        raise DomainError(f"a must be positive and finite, got {a!r}")


def rate_J(a: float, cfg: RootConfig = DEFAULT_CONFIG) -> RateEval:
    """Rate function ``J(a)`` with the Laplace data at its minimiser.

    ``a >= 1``: ``J = x (x - tanh x) / 2`` with ``sinh(2x)/(2x) = a``.
    ``a < 1``: ``J = xi (tan xi - xi) / 2`` with ``sin(2 xi)/(2 xi) = a``.
    """
    _check_a(a)
    if a >= 1.0:
        x = 0.5 * solve_beta(a, cfg)
        J = 0.5 * x * _x_minus_tanh(x)
        branch = RateBranch.AGE1
    else:
        xi = solve_xi(a, cfg)
        J = 0.5 * xi * _tan_minus_x(xi)
        branch = RateBranch.ALE1
    rho_star = solve_rho_star(a, cfg)
    H_dd = F_second(rho_star, cfg) + a
    return RateEval(a, J, rho_star, H_dd, branch)


def rate_JBS(x: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Black-Scholes large-deviation rate for the time average.

    ``x >= 1``: ``beta^2/2 - beta tanh(beta/2)`` with ``sinh(beta)/beta = x``;
    ``x < 1``: ``2 xi (tan xi - xi)`` with ``sin(2 xi)/(2 xi) = x``.
    """
    _check_a(x)
    if x >= 1.0:
        beta = solve_beta(x, cfg)
        if beta < 0.5:
            # beta^2/2 - beta tanh(beta/2) = 2 h (h - tanh h), h = beta/2
            h = 0.5 * beta
            return 2.0 * h**4 * horner(X_MINUS_TANH_R, h * h)
        return 0.5 * beta * beta - beta * math.tanh(0.5 * beta)
    xi = solve_xi(x, cfg)
    return 2.0 * xi * _tan_minus_x(xi)


def H(a: float, rho: float) -> float:
    """Laplace exponent ``(1 + a^2 rho^2)/(2a) - pi^2/2 + F(rho)``."""
    return (1.0 + a * a * rho * rho) / (2.0 * a) - HALF_PI2 + F(rho)


def J_inf_oracle(a: float, full_output: bool = False, xtol: float = 1e-11, max_iter: int = 500):
    """Minimise ``H(a, .)`` over ``(0, pi/2]`` by golden-section search.

    Only a cross-check for ``rate_J``: it uses nothing but ``F``.
    Returns ``J`` or, with ``full_output``, ``(J, rho_min)``.
    """
    _check_a(a)
    lo, hi = 1e-8, 0.5 * math.pi
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    hc, hd = H(a, c), H(a, d)
    for _ in range(max_iter):
        if hi - lo <= xtol * max(1.0, abs(c)):
            break
        if hc < hd:
            hi, d, hd = d, c, hc
            c = hi - _GOLDEN * (hi - lo)
            hc = H(a, c)
        else:
            lo, c, hc = c, d, hd
            d = lo + _GOLDEN * (hi - lo)
            hd = H(a, d)
    else:
        raise ConvergenceError(f"golden section did not converge for a={a!r}")
    rho_min, J = (c, hc) if hc < hd else (d, hd)
    # minimum on the boundary is allowed (rho* -> pi/2 as a -> 0)
    hb = H(a, 0.5 * math.pi)
    if hb < J:
        rho_min, J = 0.5 * math.pi, hb
    return (J, rho_min) if full_output else J


def prefactor_g(a: float, mu: float, method: str = "direct", cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Density prefactor ``g(a, mu) = (a rho*)^mu G(rho*) / (sqrt(H''(rho*)) rho*)``.

    Parameters
    ----------
    a : float
        Level of the time average, ``a > 0``.
    mu : float
        Drift.
    method : {"direct", "series"}
        ``"series"`` uses the expansion around ``a = 1``,
        ``sqrt(3)/2 * exp(c1 log a + c2 log^2 a)``, accurate to
        ``O(log^3 a)``.
    """
    _check_a(a)
    if method == "series":
        L = math.log(a)
        c1 = 0.75 * (mu + 1.0) - 0.8
        c2 = -3.0 / 80.0 * (mu + 1.0) + 57.0 / 1400.0
        return 0.5 * math.sqrt(3.0) * math.exp(c1 * L + c2 * L * L)
    if method != "direct":
        raise DomainError(f"unknown method {method!r}")
    rate = rate_J(a, cfg)
    rs = rate.rho_star
    return math.exp(mu * math.log(a * rs)) * G(rs, cfg) / (math.sqrt(rate.H_dd) * rs)


def density_asym(a: float, mu: float, t: float, cfg: RootConfig = DEFAULT_CONFIG) -> DensityPoint:
    """Leading small-t density of ``A_t/t`` at ``a``."""
    _check_a(a)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    J = rate_J(a, cfg).J
    g = prefactor_g(a, mu, cfg=cfg)
    log_density = -0.5 * math.log(2.0 * math.pi * t) + math.log(g) - J / t - math.log(a)
    return DensityPoint(a, mu, t, log_density, g, J, t / 70.0)


def density_numeric(
    a: float,
    mu: float,
    t: float,
    theta_method: str = "asym_subleading",
    tol: float = 1e-10,
    n_nodes: int = 32,
    cfg: RootConfig = DEFAULT_CONFIG,
) -> float:
    """Density of ``A_t/t`` at ``a`` by quadrature of the rho integral.

    ``theta_method="asym_subleading"`` supplies ``theta`` from the saddle
    expansion with its ``O(t)`` correction and integrates adaptively;
    ``"numeric"`` uses the oscillatory quadrature on an ``n_nodes``-point
    Gauss-Legendre rule over the region where ``H - J <= 36 t`` (reliable
    for ``t >= 0.2``).
    """
    _check_a(a)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    rate = rate_J(a, cfg)
    rs, J = rate.rho_star, rate.J
    width = math.sqrt(t / rate.H_dd)
    hi_cap = 0.5 * math.pi + 5.0

    def log_kernel(rho):
        # everything except theta, with exp(J/t) pulled out
        return mu * math.log(a * rho) - (1.0 + a * a * rho * rho) / (2.0 * a * t) + J / t - math.log(rho)

    if theta_method == "asym_subleading":

        def integrand(rho):
            th = theta_hat(rho / t, t, with_subleading=True, cfg=cfg)
            return math.exp(log_kernel(rho) + th.log_leading) * th.subleading_factor

        lo = max(rs - 12.0 * width, 1e-300)
        hi = min(rs + 12.0 * width, hi_cap)
        val, err = integrate.quad(integrand, lo, hi, points=[rs], epsabs=0.0, epsrel=tol, limit=200)
        if not abs(err) <= max(10.0 * tol * abs(val), 1e-300):
            raise ConvergenceError(f"rho integral did not converge: value={val!r}, error={err!r}")
    elif theta_method == "numeric":
        # cut where the integrand has dropped by exp(-36); beyond that theta
        # is both negligible and too small for the oscillatory quadrature
        def excess(rho):
            return (H(a, rho) - J) / t - 36.0

        lo_end = max(rs - 12.0 * width, 1e-6)
        hi_end = min(rs + 12.0 * width, hi_cap)
        lo = optimize.brentq(excess, lo_end, rs, xtol=1e-12) if excess(lo_end) > 0 else lo_end
        hi = optimize.brentq(excess, rs, hi_end, xtol=1e-12) if excess(hi_end) > 0 else hi_end
        nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
        val = 0.0
        for x, w in zip(nodes, weights):
            rho = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
            res = theta_numeric(rho / t, t, tol=tol)
            if res.precision_loss:
                raise PrecisionLossError(f"theta_numeric lost precision at r={rho / t!r}, t={t!r}")
            val += w * math.exp(log_kernel(rho)) * res.value
        val *= 0.5 * (hi - lo)
    else:
        raise DomainError(f"unknown theta_method {theta_method!r}")
    return math.exp(-0.5 * mu * mu * t - J / t) / a * val
