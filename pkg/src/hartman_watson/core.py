"""Small-t saddle-point approximation of the Hartman-Watson integral.

With ``rho = r t`` held fixed,

    theta(rho/t, t) ~ G(rho) / (2 pi t) * exp(-(F(rho) - pi^2/2) / t)
                      * (1 + t * g2_tilde(rho) / 2 + O(t^2)).

``F``, ``G`` and ``g2_tilde`` have closed forms on the two saddle branches
(``rho < 1`` via ``x1``, ``rho > 1`` via ``y1``), joined analytically at
``rho = 1``. Near the junction all branch quantities are smooth functions
of ``s = x1**2`` (or ``s = -(pi - y1)**2``) and are evaluated from exact
power series to avoid cancellation; inside ``|rho - 1| <= EPS_SWITCH``
Taylor polynomials in ``rho - 1`` / ``1/rho - 1`` are used instead of a
root solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ._series import G2_NUM_P, SINHC, XCOTH_Q, horner
from .errors import DomainError
from .saddle import (
    DEFAULT_CONFIG,
    EPS_SWITCH,
    Branch,
    RootConfig,
    SaddleBranch,
    solve_x1,
    solve_y1,
    solve_z1,
)

__all__ = [
    "CoreEval",
    "ThetaApprox",
    "F",
    "F_prime",
    "F_second",
    "G",
    "g2_tilde",
    "evaluate",
    "near_one_series",
    "theta_hat",
    "theta_rho1_series",
    "RHO1_SERIES_COEFFS",
    "F_asymptotic_small_rho",
    "F_asymptotic_large_rho",
    "G_asymptotic_small_rho",
    "G_asymptotic_large_rho",
    "g2_tilde_asymptotic_small_rho",
    "g2_tilde_asymptotic_large_rho",
]

HALF_PI2 = 0.5 * math.pi**2
_S_SERIES = 2.5

# Taylor coefficients around rho = 1. F in powers of (rho - 1); G / sqrt(3)
# and g2_tilde in powers of (1/rho - 1).
F_NEAR_ONE = (
    None,  # constant pi^2/2 - 1, kept in floating point below
    Fraction(-1),
    Fraction(3, 2),
    Fraction(-6, 5),
    Fraction(351, 350),
    Fraction(-108, 125),
    Fraction(256338, 336875),
)
G_NEAR_ONE = (
    Fraction(1),
    Fraction(1, 5),
    Fraction(-4, 35),
    Fraction(2, 25),
    Fraction(-1637, 26950),
    Fraction(2111059, 43793750),
    Fraction(-30158056, 766390625),
)
G2_NEAR_ONE = (
    Fraction(-1, 35),
    Fraction(0),
    Fraction(144, 67375),
    Fraction(-11952, 4379375),
    Fraction(39204, 13934375),
    Fraction(-34985232, 13028640625),
    Fraction(18074676024, 7331115859375),
)

# theta(1/t, t) = sqrt(3)/(2 pi t) e^{1/t} (1 + c1 t + c2 t^2 + ...)
RHO1_SERIES_COEFFS = (Fraction(1), Fraction(-1, 70), Fraction(749033, 1034880000))


@dataclass(frozen=True)
class CoreEval:
    rho: float
    F: float
    Fp: float
    Fpp: float
    G: float
    g2t: float
    branch: SaddleBranch


@dataclass(frozen=True)
class ThetaApprox:
    """Saddle-point approximation of ``theta(r, t)``.

    ``log_leading`` is the log of the leading term only. ``value`` is
    ``exp(log_leading)``, multiplied by ``subleading_factor`` when
    ``with_subleading`` is set; ``saturation`` is ``"overflow"`` or
    ``"underflow"`` when the exponential is not representable.
    """

    log_leading: float
    value: float
    subleading_factor: float
    error_bound: float
    rho: float
    t: float
    with_subleading: bool = False
    saturation: Optional[str] = None

    @property
    def log_value(self) -> float:
        if self.with_subleading:
            return self.log_leading + math.log(self.subleading_factor)
        return self.log_leading


def _poly(coeffs, z):
    return horner([float(c) for c in coeffs], z)


def near_one_series(rho: float) -> CoreEval:
    """``F``, ``F'``, ``F''``, ``G``, ``g2_tilde`` from their Taylor series at 1.

    Accurate to double precision for ``|rho - 1| <= 1e-3``; usable as a
    cross-check somewhat beyond.
    """
    d = rho - 1.0
    e = 1.0 / rho - 1.0
    fc = [HALF_PI2 - 1.0] + [float(c) for c in F_NEAR_ONE[1:]]
    f = horner(fc, d)
    fp = horner([k * fc[k] for k in range(1, len(fc))], d)
    fpp = horner([k * (k - 1) * fc[k] for k in range(2, len(fc))], d)
    g = math.sqrt(3.0) * _poly(G_NEAR_ONE, e)
    g2 = _poly(G2_NEAR_ONE, e)
    return CoreEval(rho, f, fp, fpp, g, g2, SaddleBranch(Branch.NEAR_ONE, None, rho))


def _from_series(rho, s, fp, branch):
    # s = x^2 (rho < 1) or -z^2 (rho > 1); exact series, no cancellation
    q = horner(XCOTH_Q, s)
    f = HALF_PI2 - 1.0 + 0.5 * s - s * q
    g = 1.0 / math.sqrt(q)
    g2 = horner(G2_NUM_P, s) / (12.0 * q**3)
    fpp = horner(SINHC, s) ** 2 / q
    return CoreEval(rho, f, fp, fpp, g, g2, branch)


def _below_one(rho, cfg):
    x = solve_x1(rho, cfg)
    branch = SaddleBranch(Branch.BELOW1, x, rho)
    s = x * x
    fp = -math.cosh(x) if x < 700.0 else -math.inf
    if s <= _S_SERIES:
        return _from_series(rho, s, fp, branch)
    c = x / math.tanh(x)  # = rho cosh x
    u = c - 1.0
    f = HALF_PI2 + 0.5 * s - c
    g = x / math.sqrt(u)
    g2 = (15.0 * u + 3.0 * u * u - 5.0 * s) / (12.0 * u**3)
    log_sinh = x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)
    try:
        fpp = math.exp(2.0 * log_sinh - math.log(u))
    except OverflowError:  # ~1/rho^2, beyond double range for rho < ~1e-154
        fpp = math.inf
    return CoreEval(rho, f, fp, fpp, g, g2, branch)


def _above_one(rho, cfg):
    if rho <= 2.0:
        z = solve_z1(rho, cfg)
        y = math.pi - z
        branch = SaddleBranch(Branch.ABOVE1, y, rho)
        fp = -math.cos(z)
        s = -z * z
        if -s <= _S_SERIES:
            return _from_series(rho, s, fp, branch)
        zcot = z / math.tan(z)
        w = 1.0 - zcot  # = 1 + rho cos y
        f = HALF_PI2 - 0.5 * z * z - zcot
        g = z / math.sqrt(w)
        g2 = (15.0 * w - 3.0 * w * w - 5.0 * z * z) / (12.0 * w**3)
        fpp = math.sin(z) ** 2 / w
        return CoreEval(rho, f, fp, fpp, g, g2, branch)
    y = solve_y1(rho, cfg)
    branch = SaddleBranch(Branch.ABOVE1, y, rho)
    c = rho * math.cos(y)
    w = 1.0 + c
    f = -0.5 * y * y + c + math.pi * y
    g = rho * math.sin(y) / math.sqrt(w)
    g2 = (12.0 + 9.0 * c + 2.0 * c * c - 5.0 * rho * rho) / (12.0 * w**3)
    fpp = math.sin(y) ** 2 / w
    return CoreEval(rho, f, math.cos(y), fpp, g, g2, branch)


def evaluate(rho: float, cfg: RootConfig = DEFAULT_CONFIG, *, use_series: bool = True) -> CoreEval:
    """Evaluate all branch quantities at ``rho``.

    ``use_series=False`` forces the closed-form branch even inside the
    near-one band (used to check continuity across ``rho = 1``).
    """
    if not rho > 0 or not math.isfinite(rho):
        raise DomainError(f"rho must be positive and finite, got {rho!r}")
    if use_series and abs(rho - 1.0) <= EPS_SWITCH:
        return near_one_series(rho)
    if rho == 1.0:
        return _from_series(1.0, 0.0, -1.0, SaddleBranch(Branch.NEAR_ONE, None, 1.0))
    if rho < 1.0:
        return _below_one(rho, cfg)
    return _above_one(rho, cfg)


def F(rho: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Exponent ``F(rho)``; minimum ``3 pi^2/8`` at ``rho = pi/2``."""
    return evaluate(rho, cfg).F


def F_prime(rho: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """``F'(rho)``: ``-cosh x1`` below 1, ``cos y1`` above."""
    return evaluate(rho, cfg).Fp


def F_second(rho: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """``F''(rho)`` by implicit differentiation of the saddle equations.

    ``sinh(x1)^2 / (rho cosh x1 - 1)`` below 1, ``sin(y1)^2 / (1 + rho cos y1)``
    above, ``3`` at ``rho = 1``.
    """
    return evaluate(rho, cfg).Fpp


def G(rho: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Leading prefactor ``G(rho)``; ``G(1) = sqrt(3)``."""
    return evaluate(rho, cfg).G


def g2_tilde(rho: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Relative O(t) correction coefficient; ``-1/35`` at ``rho = 1``."""
    return evaluate(rho, cfg).g2t


def theta_hat(r: float, t: float, with_subleading: bool = False, cfg: RootConfig = DEFAULT_CONFIG) -> ThetaApprox:
    """Saddle-point approximation of ``theta(r, t)`` at ``rho = r t``.

    Parameters
    ----------
    r, t : float
        Positive arguments of ``theta``.
    with_subleading : bool
        Multiply the leading term by ``1 + t g2_tilde(rho) / 2``.

    Returns
    -------
    ThetaApprox
        Carries the log of the leading term so that values far outside the
        double range (``t -> 0``) are still usable.
    """
    if not (r > 0 and t > 0):
        raise DomainError(f"theta_hat needs r, t > 0, got r={r!r}, t={t!r}")
    rho = r * t
    ev = evaluate(rho, cfg)
    log_leading = -(ev.F - HALF_PI2) / t + math.log(ev.G) - math.log(2.0 * math.pi * t)
    factor = 1.0 + 0.5 * t * ev.g2t
    saturation = None
    try:
        value = math.exp(log_leading)
    except OverflowError:
        value, saturation = math.inf, "overflow"
    else:
        if value == 0.0:
            saturation = "underflow"
    if with_subleading:
        value *= factor
    return ThetaApprox(
        log_leading=log_leading,
        value=value,
        subleading_factor=factor,
        error_bound=min(t / 70.0, 1.0),
        rho=rho,
        t=t,
        with_subleading=with_subleading,
        saturation=saturation,
    )


def theta_rho1_series(t: float, order: int = 2) -> float:
    """``theta(1/t, t)`` from its expansion at ``rho = 1`` up to ``t**order``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    if not 0 <= order < len(RHO1_SERIES_COEFFS):
        raise DomainError(f"order must be in 0..{len(RHO1_SERIES_COEFFS) - 1}, got {order!r}")
    poly = horner([float(c) for c in RHO1_SERIES_COEFFS[: order + 1]], t)
    return math.sqrt(3.0) / (2.0 * math.pi * t) * math.exp(1.0 / t) * poly


# Regime helpers, used for validation only; the caller picks the regime.


def F_asymptotic_small_rho(rho):
    L = math.log(1.0 / rho)
    ell = math.log(2.0 * L)
    return 0.5 * L * L + L * ell - L + 0.5 * ell * ell + HALF_PI2


def F_asymptotic_large_rho(rho):
    return rho + math.pi**2 / (2.0 * (1.0 + rho))


def G_asymptotic_small_rho(rho):
    L = math.log(1.0 / rho)
    return math.sqrt(L) - rho * rho * math.sqrt(L) + (math.log(2.0 * L) + 1.0) / (2.0 * math.sqrt(L))


def G_asymptotic_large_rho(rho):
    return math.pi * rho / (1.0 + rho) ** 1.5


def g2_tilde_asymptotic_small_rho(rho):
    return -1.0 / (6.0 * math.log(1.0 / rho))


def g2_tilde_asymptotic_large_rho(rho):
    return -0.25 / rho + 1.5 / (rho * rho)
