"""Bracketed scalar root finders for the saddle-point equations.

Every transcendental equation in the package reduces to one of two
inversions, ``sinh(w)/w = v`` (``v >= 1``) or ``sin(w)/w = v`` on
``[0, pi)`` (``0 < v <= 1``), plus the Gerhold equation for ``u0``.
They are solved in log form with a safeguarded Newton/bisection
iteration that always keeps a sign-changing bracket.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

from ._series import SINHC, XCOTH_Q, horner
from .errors import ConvergenceError, DomainError, NoRootError

__all__ = [
    "Branch",
    "RootConfig",
    "SaddleBranch",
    "DEFAULT_CONFIG",
    "EPS_SWITCH",
    "classify",
    "hybrid_newton",
    "inverse_sinc_log",
    "inverse_sinhc_log",
    "solve_beta",
    "solve_rho_star",
    "solve_u0",
    "solve_x1",
    "solve_xi",
    "solve_y1",
    "solve_z1",
    "u0_equation",
]

EPS_SWITCH = 1e-3
_SMALL_S = 1.0


@dataclass(frozen=True)
class RootConfig:
    """Precision contract shared by all solvers."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_iter: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise DomainError(f"abs_tol must be non-negative, got {self.abs_tol}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")


DEFAULT_CONFIG = RootConfig()


class Branch(enum.Enum):
    BELOW1 = "Below1"
    NEAR_ONE = "NearOne"
    ABOVE1 = "Above1"


@dataclass(frozen=True)
class SaddleBranch:
    """Classification of ``rho`` with its saddle root.

    ``root`` is ``x1`` on the ``BELOW1`` branch, ``y1`` on ``ABOVE1``
    and ``None`` inside the near-one band, where series are used instead.
    """

    branch: Branch
    root: Optional[float]
    rho: float


def hybrid_newton(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: RootConfig = DEFAULT_CONFIG,
    x0: Optional[float] = None,
) -> float:
    """Find a root of ``f`` in ``[lo, hi]``.

    Newton steps are taken while they stay inside the current bracket and
    shrink fast enough; otherwise the bracket is bisected. Requires
    ``f(lo)`` and ``f(hi)`` to have opposite signs.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise NoRootError(f"no sign change on [{lo!r}, {hi!r}]")
    neg_lo = flo < 0

    x = 0.5 * (lo + hi) if x0 is None or not lo < x0 < hi else x0
    dx_old = hi - lo
    for _ in range(cfg.max_iter):
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx < 0) == neg_lo:
            lo = x
        else:
            hi = x
        d = fprime(x)
        newton = False
        if d != 0.0 and math.isfinite(d):
            step = fx / d
            xn = x - step
            if lo < xn < hi and abs(2.0 * step) <= abs(dx_old):
                newton = True
        if not newton:
            xn = 0.5 * (lo + hi)
        dx_old = xn - x
        tol = max(cfg.abs_tol, 0.25 * cfg.rel_tol * abs(xn))
        if newton and abs(dx_old) <= tol:
            return xn
        if hi - lo <= max(cfg.abs_tol, 4.0 * math.ulp(abs(xn))):
            return xn
        x = xn
    raise ConvergenceError(f"bracket [{lo!r}, {hi!r}] not resolved in {cfg.max_iter} iterations")


# -- log sinh(w)/w and log sin(w)/w with full relative accuracy near 0 --------


def _log_sinhc(w):
    s = w * w
    if s <= _SMALL_S:
        return math.log1p(s * horner(SINHC[1:], s))
    return w + math.log1p(-math.exp(-2.0 * w)) - math.log(2.0 * w)


def _dlog_sinhc(w):
    # coth w - 1/w
    s = w * w
    if s <= _SMALL_S:
        return w * horner(XCOTH_Q, s)
    return 1.0 / math.tanh(w) - 1.0 / w


def _log_sinc(w):
    s = -w * w
    if -s <= _SMALL_S:
        return math.log1p(s * horner(SINHC[1:], s))
    return math.log(math.sin(w) / w)


def _dlog_sinc(w):
    # cot w - 1/w
    s = -w * w
    if -s <= _SMALL_S:
        return -w * horner(XCOTH_Q, s)
    return 1.0 / math.tan(w) - 1.0 / w


def inverse_sinhc_log(log_value: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Solve ``log(sinh(w)/w) = log_value`` for ``w >= 0``."""
    if not log_value >= 0:
        raise DomainError(f"log(sinh(w)/w) >= 0, got target {log_value!r}")
    if log_value == 0.0:
        return 0.0
    L = log_value
    if L < 1.0:
        guess = math.sqrt(6.0 * L)
    else:
        guess = L + math.log(2.0 * L)
    hi = 1.5 * guess + 1.0
    while _log_sinhc(hi) <= L:
        hi *= 2.0
    return hybrid_newton(lambda w: _log_sinhc(w) - L, _dlog_sinhc, 0.0, hi, cfg, x0=guess)


def inverse_sinc_log(log_value: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Solve ``log(sin(w)/w) = log_value`` for ``w`` in ``[0, pi)``."""
    if not log_value <= 0:
        raise DomainError(f"log(sin(w)/w) <= 0 on [0, pi), got target {log_value!r}")
    if log_value == 0.0:
        return 0.0
    L = log_value
    delta = min(0.5 * math.pi, 0.5 * math.pi * math.exp(L))
    hi = math.pi - delta
    while hi < math.pi and _log_sinc(hi) >= L:
        hi = math.nextafter(hi, math.pi) if math.pi - hi < 1e-15 else 0.5 * (hi + math.pi)
    if not hi < math.pi:
        return math.nextafter(math.pi, 0.0)
    guess = math.sqrt(-6.0 * L) if L > -0.5 else None
    return hybrid_newton(lambda w: _log_sinc(w) - L, _dlog_sinc, 0.0, hi, cfg, x0=guess)


# -- saddle roots ---------------------------------------------------------------


def solve_x1(rho: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Root ``x1 > 0`` of ``rho * sinh(x1) / x1 = 1`` for ``0 < rho < 1``."""
    if not 0.0 < rho < 1.0:
        raise DomainError(f"solve_x1 needs 0 < rho < 1, got {rho!r}")
    return inverse_sinhc_log(-math.log(rho), cfg)


def solve_z1(rho: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Complement ``z1 = pi - y1``, i.e. the root of ``sin(z)/z = 1/rho``.

    Accurate in relative terms as ``rho -> 1+`` where ``y1 -> pi``.
    """
    if not rho > 1.0:
        raise DomainError(f"solve_z1 needs rho > 1, got {rho!r}")
    return inverse_sinc_log(-math.log(rho), cfg)


def solve_y1(rho: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Root ``y1`` in ``(0, pi)`` of ``y1 + rho * sin(y1) = pi`` for ``rho > 1``."""
    if not rho > 1.0:
        raise DomainError(f"solve_y1 needs rho > 1, got {rho!r}")
    if rho <= 2.0:
        return math.pi - solve_z1(rho, cfg)
    # f is concave on (0, pi) with its maximum at cos y = -1/rho
    hi = math.acos(-1.0 / rho)
    guess = math.pi / (1.0 + rho) - math.pi**3 / 6.0 * rho / (1.0 + rho) ** 4
    return hybrid_newton(
        lambda y: (y + rho * math.sin(y) - math.pi) / math.pi,
        lambda y: (1.0 + rho * math.cos(y)) / math.pi,
        0.0,
        hi,
        cfg,
        x0=guess,
    )


def classify(rho: float, cfg: RootConfig = DEFAULT_CONFIG, eps_switch: float = EPS_SWITCH) -> SaddleBranch:
    if not (rho > 0 and math.isfinite(rho)):
        raise DomainError(f"rho must be positive and finite, got {rho!r}")
    if abs(rho - 1.0) <= eps_switch:
        return SaddleBranch(Branch.NEAR_ONE, None, rho)
    if rho < 1.0:
        return SaddleBranch(Branch.BELOW1, solve_x1(rho, cfg), rho)
    return SaddleBranch(Branch.ABOVE1, solve_y1(rho, cfg), rho)


# -- rate-function roots ------------------------------------------------------------


def solve_beta(a: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Root ``beta >= 0`` of ``sinh(beta)/beta = a`` for ``a >= 1``."""
    if not a >= 1.0:
        raise DomainError(f"solve_beta needs a >= 1, got {a!r}")
    return inverse_sinhc_log(math.log(a), cfg)


def solve_xi(a: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Root ``xi`` in ``[0, pi/2)`` of ``sin(2 xi)/(2 xi) = a`` for ``0 < a <= 1``."""
    if not 0.0 < a <= 1.0:
        raise DomainError(f"solve_xi needs 0 < a <= 1, got {a!r}")
    return 0.5 * inverse_sinc_log(math.log(a), cfg)


def solve_rho_star(a: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Minimiser ``rho*`` of ``H(rho) = (1 + a^2 rho^2)/(2a) - pi^2/2 + F(rho)``.

    For ``a >= 1`` the stationarity condition ``cosh(x) = a rho`` with
    ``sinh(2x)/(2x) = a`` gives ``rho* = x / sinh(x)``; for ``a < 1``,
    ``cos(y) = -a rho`` with ``y = pi - xi`` gives ``rho* = xi / sin(xi)``.
    """
    if not a > 0:
        raise DomainError(f"solve_rho_star needs a > 0, got {a!r}")
    if a >= 1.0:
        half_beta = 0.5 * solve_beta(a, cfg)
        return math.exp(-_log_sinhc(half_beta))
    xi = solve_xi(a, cfg)
    return math.exp(-_log_sinc(xi))


# -- Gerhold's u0 -------------------------------------------------------------------


def u0_equation(u: float, gerhold_rho: float) -> float:
    """Right-hand side ``log u/(2 sqrt(2u)) - rho_G/sqrt(2u) + 1/(4u)``."""
    q = math.sqrt(2.0 * u)
    return (0.5 * math.log(u) - gerhold_rho) / q + 0.25 / u


def _u0_equation_du(u, gerhold_rho):
    return (2.0 - math.log(u) + 2.0 * gerhold_rho) / (4.0 * math.sqrt(2.0) * u**1.5) - 0.25 / (u * u)


def solve_u0(r: float, t: float, cfg: RootConfig = DEFAULT_CONFIG) -> float:
    """Root ``u0(t)`` of Gerhold's saddle equation.

    The largest-``u`` root is returned: it is the branch that connects to
    ``u0 ~ log(1/t)^2 / (2 t^2)`` as ``t -> 0``.
    """
    if not (r > 0 and t > 0):
        raise DomainError(f"solve_u0 needs r, t > 0, got r={r!r}, t={t!r}")
    g_rho = math.log(r / (2.0 * math.sqrt(2.0)))

    def resid(v):
        return u0_equation(math.exp(v), g_rho) / t - 1.0

    def dresid(v):
        u = math.exp(v)
        return u * _u0_equation_du(u, g_rho) / t

    if t < 1.0:
        seed = math.log(1.0 / t) ** 2 / (2.0 * t * t)
        v_hi = math.log(max(seed, 1.0))
    else:
        v_hi = 0.0
    while resid(v_hi) >= 0.0:
        v_hi += math.log(2.0)
        if v_hi > 700.0:
            raise NoRootError(f"u0 equation stays above t={t!r} for large u")
    v_lo = v_hi
    step = math.log(2.0)
    while resid(v_lo) < 0.0:
        v_lo -= step
        if v_lo < -690.0:
            raise NoRootError(f"u0 equation never reaches t={t!r} for r={r!r}")
    v = hybrid_newton(resid, dresid, v_lo, v_lo + step, cfg)
    return math.exp(v)
