import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hartman_watson import core
from hartman_watson.errors import DomainError
from hartman_watson.saddle import Branch, solve_x1, solve_y1

HALF_PI2 = math.pi**2 / 2

TABLE_F = [(0.05, 13.9816), (0.1, 10.5584), (0.15, 8.84), (0.25, 6.9876), (0.5, 5.0712),
           (0.75, 4.3023), (1.0, 3.9348), (1.25, 3.7630), (1.5, 3.7037), (5.0, 5.8393)]


@pytest.mark.parametrize("rho,expected", TABLE_F)
def test_F_table(rho, expected):
    assert core.F(rho) == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize(
    "t,expected",
    [(0.2, 1.176e-12), (0.3, 2.713e-6), (1.0, 0.2722), (1.5, 0.2960), (2.5, 0.1682), (10.0, 0.01643)],
)
def test_theta_hat_table(t, expected):
    assert core.theta_hat(0.5, t).value == pytest.approx(expected, rel=1e-3)


def test_theta_hat_at_rho_one_closed_form():
    # rho = 1: F = pi^2/2 - 1, G = sqrt(3)
    for t in (0.5, 2.0, 4.0):
        th = core.theta_hat(1 / t, t)
        assert th.value == pytest.approx(math.sqrt(3) / (2 * math.pi * t) * math.exp(1 / t), rel=1e-14)


def test_exact_constants():
    assert core.F(1.0) == pytest.approx(HALF_PI2 - 1, abs=1e-14)
    assert core.F(math.pi / 2) == pytest.approx(3 * math.pi**2 / 8, abs=1e-14)
    assert core.F_prime(math.pi / 2) == pytest.approx(0.0, abs=1e-14)
    assert core.G(1.0) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert core.g2_tilde(1.0) == pytest.approx(-1 / 35, rel=1e-15)
    assert core.F_second(1.0) == pytest.approx(3.0, rel=1e-15)


def test_F_minimum_at_half_pi():
    rhos = np.linspace(1.2, 2.0, 161)
    vals = [core.F(r) for r in rhos]
    assert rhos[int(np.argmin(vals))] == pytest.approx(math.pi / 2, abs=5e-3)


@pytest.mark.parametrize("rho", [0.01, 0.3, 0.9, 0.9995, 1.0, 1.0007, 1.1, 1.7, 3.0, 50.0])
def test_derivatives_match_finite_differences(rho):
    h = 1e-5 * rho
    fd1 = (core.F(rho + h) - core.F(rho - h)) / (2 * h)
    fd2 = (core.F_prime(rho + h) - core.F_prime(rho - h)) / (2 * h)
    assert core.F_prime(rho) == pytest.approx(fd1, rel=1e-7, abs=1e-9)
    assert core.F_second(rho) == pytest.approx(fd2, rel=1e-6)


@pytest.mark.parametrize("rho", [0.02, 0.4, 0.8, 1.2, 1.8, 2.5, 10.0])
def test_series_path_matches_literal_closed_forms(rho):
    ev = core.evaluate(rho)
    if rho < 1:
        x = solve_x1(rho)
        u = x / math.tanh(x) - 1
        F = HALF_PI2 + x * x / 2 - x / math.tanh(x)
        G = x / math.sqrt(u)
        g2 = (15 * u + 3 * u * u - 5 * x * x) / (12 * u**3)
        Fpp = math.sinh(x) ** 2 / (rho * math.cosh(x) - 1)
    else:
        y = solve_y1(rho)
        c = rho * math.cos(y)
        F = -y * y / 2 + c + math.pi * y
        G = rho * math.sin(y) / math.sqrt(1 + c)
        g2 = (12 + 9 * c + 2 * c * c - 5 * rho * rho) / (12 * (1 + c) ** 3)
        Fpp = math.sin(y) ** 2 / (1 + c)
    assert ev.F == pytest.approx(F, rel=1e-12)
    assert ev.G == pytest.approx(G, rel=1e-10)
    assert ev.g2t == pytest.approx(g2, rel=1e-8)
    assert ev.Fpp == pytest.approx(Fpp, rel=1e-10)


@given(st.floats(min_value=-1e-3, max_value=1e-3).filter(lambda d: d != 0.0))
@settings(max_examples=50, deadline=None)
def test_near_one_band_continuity(d):
    rho = 1.0 + d
    direct = core.evaluate(rho, use_series=False)
    series = core.near_one_series(rho)
    for name in ("F", "Fp", "Fpp", "G", "g2t"):
        assert getattr(series, name) == pytest.approx(getattr(direct, name), rel=1e-9)


def test_near_one_band_branch_label():
    assert core.evaluate(1.0005).branch.branch is Branch.NEAR_ONE
    assert core.evaluate(1.0005, use_series=False).branch.branch is Branch.ABOVE1


def test_series_rationals():
    assert Fraction(1, 2) * core.G2_NEAR_ONE[0] == Fraction(-1, 70)
    assert core.RHO1_SERIES_COEFFS[1] == Fraction(-1, 70)
    assert core.RHO1_SERIES_COEFFS[2] == Fraction(749033, 1034880000)
    assert core.F_NEAR_ONE[1:4] == (Fraction(-1), Fraction(3, 2), Fraction(-6, 5))
    assert core.G_NEAR_ONE[:3] == (Fraction(1), Fraction(1, 5), Fraction(-4, 35))


def test_rho1_series_matches_theta_hat():
    t = 0.05
    lead = core.theta_rho1_series(t, order=0)
    assert lead == pytest.approx(core.theta_hat(1 / t, t).value, rel=1e-13)
    sub = core.theta_rho1_series(t, order=1)
    assert sub == pytest.approx(core.theta_hat(1 / t, t, with_subleading=True).value, rel=1e-13)


@pytest.mark.parametrize("rho", np.geomspace(1e-6, 1e4, 41))
def test_g2_tilde_range(rho):
    g2 = core.g2_tilde(rho)
    assert -1 / 35 - 1e-12 <= g2 < 0


@pytest.mark.parametrize("rho", np.geomspace(1e-4, 1e3, 29))
def test_G_positive_and_F_above_minimum(rho):
    assert core.G(rho) > 0
    assert core.F(rho) >= 3 * math.pi**2 / 8 - 1e-12


def test_F_small_rho_asymptotic_gap_shrinks():
    gaps = [abs(core.F(r) - core.F_asymptotic_small_rho(r)) for r in (1e-4, 1e-16, 1e-64, 1e-256)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 0.1


@pytest.mark.parametrize("rho", [50.0, 200.0, 1000.0])
def test_large_rho_asymptotics(rho):
    assert core.F(rho) == pytest.approx(core.F_asymptotic_large_rho(rho), rel=1e-3)
    assert core.G(rho) == pytest.approx(core.G_asymptotic_large_rho(rho), rel=5e-2)
    assert core.g2_tilde(rho) == pytest.approx(core.g2_tilde_asymptotic_large_rho(rho), rel=5e-2)


def test_small_rho_g_asymptotics():
    rho = 1e-40
    assert core.G(rho) == pytest.approx(core.G_asymptotic_small_rho(rho), rel=2e-2)
    assert core.g2_tilde(rho) == pytest.approx(core.g2_tilde_asymptotic_small_rho(rho), rel=0.2)


def test_error_bound_and_subleading():
    th = core.theta_hat(1.0, 1.0, with_subleading=True)
    assert th.error_bound == pytest.approx(1 / 70)
    assert th.subleading_factor == pytest.approx(1 - 1 / 70, rel=1e-14)
    assert th.log_value == pytest.approx(math.log(th.value), rel=1e-14)
    assert core.theta_hat(0.01, 200.0).error_bound == 1.0


def test_underflow_is_reported():
    th = core.theta_hat(0.5, 0.002)
    assert th.value == 0.0 and th.saturation == "underflow"
    assert th.log_leading < -2000


@pytest.mark.parametrize("r,t", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0), (math.nan, 1.0)])
def test_theta_hat_domain(r, t):
    with pytest.raises(DomainError):
        core.theta_hat(r, t)


def test_rho1_series_domain():
    with pytest.raises(DomainError):
        core.theta_rho1_series(1.0, order=3)
    with pytest.raises(DomainError):
        core.theta_rho1_series(-1.0)
