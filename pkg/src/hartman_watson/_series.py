"""Exact Taylor coefficients for the saddle-point kernels.

All series are in ``s``: ``s = x**2`` on the hyperbolic branch and
``s = -z**2`` on the trigonometric one, so a single table serves both
(``x coth x`` continues to ``z cot z`` under ``x -> i z``).
"""

from fractions import Fraction
from math import comb, factorial

_N_TERMS = 32


def bernoulli_numbers(n):
    """Return ``[B_0, ..., B_n]`` as exact fractions (``B_1 = -1/2``)."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(comb(m + 1, k) * b[k] for k in range(m))
        b.append(-acc / (m + 1))
    return b


def _mul(p, q, n):
    out = [Fraction(0)] * n
    for i, a in enumerate(p[:n]):
        if a:
            for j, c in enumerate(q[: n - i]):
                out[i + j] += a * c
    return out


def _build():
    n = _N_TERMS
    bern = bernoulli_numbers(2 * n + 8)

    # u(s) = x coth x - 1 = s * Q(s)
    q = [Fraction(2 ** (2 * k) * bern[2 * k], factorial(2 * k)) for k in range(1, n + 4)]

    # numerator of g2 tilde: 15 u + 3 u^2 - 5 s = s^3 * P(s)
    u = [Fraction(0)] + q  # coefficients of u in powers of s
    u2 = _mul(u, u, n + 4)
    num = [15 * u[k] + 3 * u2[k] for k in range(n + 4)]
    num[1] -= 5
    assert num[0] == num[1] == num[2] == 0
    p = num[3 : n + 3]

    sinhc = [Fraction(1, factorial(2 * k + 1)) for k in range(n)]

    # x - tanh x = x^3 * R(x^2)
    r = []
    for k in range(2, n + 2):
        c = Fraction(2 ** (2 * k) * (2 ** (2 * k) - 1), factorial(2 * k)) * bern[2 * k]
        r.append(-c)
    return q[:n], p, sinhc, r[:n]


_Q, _P, _SINHC, _R = _build()

XCOTH_Q = tuple(float(c) for c in _Q)
G2_NUM_P = tuple(float(c) for c in _P)
SINHC = tuple(float(c) for c in _SINHC)
X_MINUS_TANH_R = tuple(float(c) for c in _R)


def horner(coeffs, s):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc
