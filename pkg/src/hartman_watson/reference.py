"""Independent evaluations of the Hartman-Watson integral.

``theta_numeric`` integrates the defining oscillatory integral

    theta(r, t) = r / sqrt(2 pi^3 t) * exp(pi^2 / (2 t))
                  * int_0^inf exp(-xi^2/(2t) - r cosh xi) sinh xi sin(pi xi / t) dxi

directly on the real axis. The result is a small difference of large
alternating half-period contributions (about ``exp(-pi^2/(2t))`` relative),
so the sum is carried in extended precision and the number of digits lost
to cancellation is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import mpmath

from .core import theta_hat
from .errors import DomainError, PrecisionLossError
from .saddle import DEFAULT_CONFIG, RootConfig, solve_u0, u0_equation

__all__ = [
    "QuadResult",
    "GerholdResult",
    "TailCoeff",
    "aitken",
    "theta_numeric",
    "theta_gerhold",
    "bessel_I0",
    "bessel_K0",
    "hw_density",
    "theta_tail_coeff",
]

EULER_GAMMA = 0.57721566490153286061
MIN_DIGITS = 3.0


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_err_est: float
    n_halfperiods: int
    converged: bool
    precision_loss: bool = False
    digits_lost: float = 0.0


def aitken(partial_sums: Sequence, rounds: Optional[int] = None):
    """Iterated Aitken delta-squared extrapolation of a sequence of partial sums.

    Each round shortens the sequence by two; stops early if a denominator
    vanishes. Returns the last entry of the final sequence.
    """
    seq = list(partial_sums)
    if rounds is None:
        rounds = (len(seq) - 1) // 2
    for _ in range(rounds):
        if len(seq) < 3:
            break
        nxt = []
        for s0, s1, s2 in zip(seq, seq[1:], seq[2:]):
            den = s2 - 2 * s1 + s0
            if den == 0:
                return seq[-1]
            nxt.append(s2 - (s2 - s1) ** 2 / den)
        seq = nxt
    return seq[-1]


def theta_numeric(
    r: float,
    t: float,
    tol: float = 1e-10,
    dps: int = 40,
    max_halfperiods: int = 4000,
) -> QuadResult:
    """Direct quadrature of ``theta(r, t)``.

    The integral is split at the zeros ``k t`` of ``sin(pi xi / t)``; each
    half period is integrated with Gauss-Legendre at ``dps`` decimal digits.
    Summation stops once the envelope
    ``exp(-xi^2/(2t) - r cosh xi) sinh xi`` bounds the remaining tail below
    the working precision. If ``max_halfperiods`` is hit first, the partial
    sums are extrapolated with iterated Aitken.

    ``precision_loss`` is set (and ``converged`` cleared) when fewer than
    three significant digits survive the cancellation.
    """
    if not (r > 0 and t > 0):
        raise DomainError(f"theta_numeric needs r, t > 0, got r={r!r}, t={t!r}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")

    with mpmath.workdps(dps):
        r_ = mpmath.mpf(r)
        t_ = mpmath.mpf(t)
        w = mpmath.pi / t_

        def integrand(xi):
            return mpmath.exp(-xi * xi / (2 * t_) - r_ * mpmath.cosh(xi)) * mpmath.sinh(xi) * mpmath.sin(w * xi)

        def envelope(xi):
            return mpmath.exp(-xi * xi / (2 * t_) - r_ * mpmath.cosh(xi)) * mpmath.sinh(xi)

        def decreasing(xi):
            return xi / t_ + r_ * mpmath.sinh(xi) > mpmath.coth(xi)

        floor = mpmath.mpf(10) ** (-(dps + 2))
        total = mpmath.mpf(0)
        quad_err = mpmath.mpf(0)
        biggest = mpmath.mpf(0)
        partial = []
        tail = mpmath.mpf(0)
        k = 0
        truncated = False
        while k < max_halfperiods:
            a = k * t_
            b = (k + 1) * t_
            pieces = max(1, int(math.ceil(float(b - a))))
            nodes = [a + (b - a) * j / pieces for j in range(pieces + 1)]
            v, e = mpmath.quad(integrand, nodes, method="gauss-legendre", error=True)
            total += v
            quad_err += abs(e)
            biggest = max(biggest, abs(v))
            partial.append(total)
            k += 1
            if decreasing(b):
                # the envelope decays at least like exp(-(xi - b) b / t) past b
                tail = envelope(b) * t_ / b
                if tail <= floor * biggest or tail < mpmath.mpf("1e-300") * floor:
                    truncated = True
                    break

        if not truncated and len(partial) >= 3:
            accel = aitken(partial[-9:])
            tail = abs(accel - total)
            total = accel

        prefactor = r_ / mpmath.sqrt(2 * mpmath.pi**3 * t_) * mpmath.exp(mpmath.pi**2 / (2 * t_))
        rounding = mpmath.mpf(10) ** (-dps) * biggest * k
        abs_err = prefactor * (quad_err + rounding + tail)
        value = prefactor * total
        if total == 0:
            digits_lost = math.inf
        elif biggest == 0:
            digits_lost = 0.0
        else:
            digits_lost = max(0.0, float(mpmath.log10(biggest / abs(total))))
        value_f = float(value)
        abs_err_f = float(abs_err)

    precision_loss = dps - digits_lost < MIN_DIGITS
    converged = (not precision_loss) and abs_err_f <= tol * abs(value_f)
    return QuadResult(
        value=value_f,
        abs_err_est=abs_err_f,
        n_halfperiods=k,
        converged=converged,
        precision_loss=precision_loss,
        digits_lost=digits_lost,
    )


@dataclass(frozen=True)
class GerholdResult:
    """Gerhold's fixed-``r`` small-``t`` approximation.

    ``valid`` is false (and ``value`` is ``None``) once the radicand
    ``log u0 - 2 - 2 rho_G`` is not positive, i.e. for ``t >= t_max``.
    """

    u0: float
    value: Optional[float]
    valid: bool
    t_max: float
    gerhold_rho: float


def theta_gerhold(r: float, t: float, cfg: RootConfig = DEFAULT_CONFIG) -> GerholdResult:
    if not (r > 0 and t > 0):
        raise DomainError(f"theta_gerhold needs r, t > 0, got r={r!r}, t={t!r}")
    gerhold_rho = math.log(r / (2.0 * math.sqrt(2.0)))
    u0 = solve_u0(r, t, cfg)
    radicand = math.log(u0) - 2.0 - 2.0 * gerhold_rho
    # the radicand vanishes at u = exp(2 + 2 rho_G); t_max is where u0 reaches it
    t_max = u0_equation(math.exp(2.0 + 2.0 * gerhold_rho), gerhold_rho)
    if radicand <= 0.0:
        return GerholdResult(u0, None, False, t_max, gerhold_rho)
    log_value = 0.5 + 0.5 * math.log(u0 / radicand) - t * u0 + math.sqrt(2.0 * u0) - math.log(math.pi)
    return GerholdResult(u0, math.exp(log_value), True, t_max, gerhold_rho)


# -- Bessel functions -------------------------------------------------------------


def bessel_I0(x: float) -> float:
    """Modified Bessel function ``I_0(x)`` for ``x >= 0``."""
    if not x >= 0:
        raise DomainError(f"bessel_I0 needs x >= 0, got {x!r}")
    if x <= 30.0:
        q = 0.25 * x * x
        term = total = 1.0
        k = 0
        while term > 1e-17 * total:
            k += 1
            term *= q / (k * k)
            total += term
        return total
    term = total = 1.0
    k = 0
    while True:
        k += 1
        nxt = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if nxt > term or nxt < 1e-17 * total:
            break
        term = nxt
        total += term
    try:
        return math.exp(x - 0.5 * math.log(2.0 * math.pi * x)) * total
    except OverflowError:
        return math.inf


def _k0_series(x):
    q = 0.25 * x * x
    term = 1.0
    harmonic = 0.0
    i0 = 1.0
    acc = 0.0
    k = 0
    while term > 1e-18:
        k += 1
        term *= q / (k * k)
        harmonic += 1.0 / k
        i0 += term
        acc += term * harmonic
    return -(math.log(0.5 * x) + EULER_GAMMA) * i0 + acc


def _k0_trapezoid(x, h=0.05):
    # K0(x) e^x = int_0^inf exp(-x (cosh s - 1)) ds; the integrand is entire
    # and decays doubly exponentially, so the trapezoidal rule converges
    # geometrically in 1/h
    total = 0.5
    k = 0
    while True:
        k += 1
        v = math.exp(-x * (math.cosh(k * h) - 1.0))
        total += v
        if v < 1e-18 * total:
            break
    return h * total * math.exp(-x)


def _k0_asymptotic(x):
    term = total = 1.0
    k = 0
    while True:
        k += 1
        nxt = -term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if abs(nxt) > abs(term) or abs(nxt) < 1e-17:
            break
        term = nxt
        total += term
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * total


def bessel_K0(x: float) -> float:
    """Modified Bessel function ``K_0(x)`` for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"bessel_K0 needs x > 0, got {x!r}")
    if x <= 2.0:
        return _k0_series(x)
    if x <= 40.0:
        return _k0_trapezoid(x)
    return _k0_asymptotic(x)


# -- derived quantities --------------------------------------------------------------


def hw_density(r: float, t: float, method: str = "asym", tol: float = 1e-10) -> float:
    """Hartman-Watson density ``theta(r, t) / I_0(r)``.

    ``method`` is ``"asym"`` (leading saddle-point term) or ``"numeric"``.
    """
    if method == "asym":
        theta = theta_hat(r, t).value
    elif method == "numeric":
        res = theta_numeric(r, t, tol=tol)
        if res.precision_loss:
            raise PrecisionLossError(f"theta_numeric lost {res.digits_lost:.1f} digits at r={r!r}, t={t!r}")
        theta = res.value
    else:
        raise DomainError(f"unknown method {method!r}")
    return theta / bessel_I0(r)


class TailCoeff(NamedTuple):
    """Coefficient of ``t^{-3/2}`` in the ``t -> inf`` tail of ``theta``."""

    approx: float  # from theta_hat: exp(-r) / (2 sqrt(r))
    exact: float  # K0(r) / sqrt(2 pi)


def theta_tail_coeff(r: float) -> TailCoeff:
    if not r > 0:
        raise DomainError(f"r must be positive, got {r!r}")
    return TailCoeff(math.exp(-r) / (2.0 * math.sqrt(r)), bessel_K0(r) / math.sqrt(2.0 * math.pi))
