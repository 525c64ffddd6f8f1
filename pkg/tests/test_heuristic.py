import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import spence

from invhull import heuristic as heur
from invhull import numtheory as nt

GAMMA = 0.5772156649015329


def rho_closed_form(u):
    """rho on [2, 3]: 1 - (1 - log(u-1)) log u + Li2(1-u) + pi^2/12, with Li2(1-u) = spence(u)."""
    return 1 - (1 - math.log(u - 1)) * math.log(u) + float(spence(u)) + math.pi**2 / 12


def test_h_of_n():
    assert heur.h_of_n(5) == pytest.approx(8 / 3 * (math.log(2) + GAMMA), rel=1e-15)
    assert heur.h_of_n(5) == pytest.approx(3.38763, abs=1e-5)


@given(st.integers(10**6, 10**8))
def test_h_range_for_sampled_moduli(n):
    # phi(n) >= n / (e^gamma log log n + 3 / log log n) keeps h well inside this band
    assert 30.0 < heur.h_of_n(n) < heur.heuristic_count(n)
    assert heur.heuristic_count(n) < 48.9


def test_h_monotone_in_phi():
    hs = [heur.heuristic_count(k) for k in range(1, 500)]
    assert all(a < b for a, b in zip(hs, hs[1:]))


def test_eta():
    assert heur.eta_constant() == pytest.approx(-0.580058, abs=1e-5)
    assert heur.eta_partial_sum([2]) == pytest.approx(math.log(0.5) / 2, rel=1e-15)
    # with the tail estimate the bound hardly matters
    assert heur.eta_constant(10**5) == pytest.approx(heur.eta_constant(10**7), abs=2e-6)
    with pytest.raises(ValueError):
        heur.eta_constant(1)


def test_eta_partial_sums_decrease():
    primes = [int(p) for p in nt.primes_upto(2000)]
    sums = [heur.eta_partial_sum(primes[:k]) for k in range(1, len(primes) + 1)]
    assert all(a > b for a, b in zip(sums, sums[1:]))


def test_eta_head_matches_pure_python_sum():
    primes = [p for p in range(2, 10**4) if nt.is_prime(p)]
    head = math.fsum(math.log(1 - 1 / p) / p for p in primes)
    tail = heur.eta_constant(10**4) - heur.eta_partial_sum(primes)
    assert heur.eta_partial_sum(primes) == pytest.approx(head, abs=1e-15)
    assert -2e-5 < tail < 0


def test_H():
    assert heur.H_intercept() == pytest.approx(-4.52264, abs=5e-5)
    for N in (10, 1234, 10**6):
        assert heur.H_of_N(N * math.e) - heur.H_of_N(N) == pytest.approx(8 / 3, abs=1e-12)
        assert heur.H_of_N(N) == pytest.approx(8 / 3 * math.log(N) + heur.H_intercept(), abs=1e-12)
    with pytest.raises(ValueError):
        heur.H_of_N(1)


def test_log_phi_average():
    assert heur.log_phi_average(1) == 0
    assert heur.log_phi_average(2) == 0
    assert heur.log_phi_average(10) == pytest.approx(
        sum(math.log(nt.euler_phi(n)) for n in range(1, 11)) / 10, rel=1e-14
    )
    eta = heur.eta_constant()
    errs = [abs(heur.log_phi_average(N) - (math.log(N) + eta - 1)) for N in (10**3, 10**4, 10**5)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.01


def test_delta():
    assert heur.delta_constant() == pytest.approx(0.086071, abs=1e-6)


def test_V_average():
    assert heur.V_average(7, "brute") == pytest.approx(17 / 6, rel=1e-15)
    assert heur.V_average(7) == heur.V_average(7, "brute")
    assert heur.V_average(1000) < heur.V_average(10**4)


def test_log_fit_recovers_line():
    Ns = np.geomspace(10, 5.77e6, 30)
    fit = heur.least_squares_log_fit([(N, 3.551166 * math.log(N) - 9.610899) for N in Ns])
    assert fit.slope == pytest.approx(3.551166, abs=1e-9)
    assert fit.intercept == pytest.approx(-9.610899, abs=1e-9)
    assert fit.residual_rms < 1e-9
    assert fit.sample_count == 30
    assert fit(100.0) == pytest.approx(3.551166 * math.log(100) - 9.610899, abs=1e-9)


def test_log_fit_two_points_and_noise():
    fit = heur.least_squares_log_fit([(10, 1.0), (100, 3.0)])
    assert fit(10) == pytest.approx(1.0) and fit(100) == pytest.approx(3.0)
    rng = np.random.default_rng(0)
    Ns = np.geomspace(10, 1e6, 50)
    eps = 1e-3
    noisy = [(N, 2.0 * math.log(N) + 1.0 + eps * rng.choice([-1, 1])) for N in Ns]
    assert abs(heur.least_squares_log_fit(noisy).slope - 2.0) < 10 * eps


def test_log_fit_errors():
    with pytest.raises(ValueError):
        heur.least_squares_log_fit([(10, 1.0)])
    with pytest.raises(ValueError):
        heur.least_squares_log_fit([(10, 1.0), (10, 2.0)])


def test_dickman_closed_forms():
    assert heur.dickman_rho(0.5) == 1.0
    assert heur.dickman_rho(1.0) == 1.0
    assert heur.dickman_rho(2.0) == pytest.approx(1 - math.log(2), rel=1e-12)
    for u in (1.2, 1.5, 1.9):
        # rho(u) = 1 - log u on [1, 2]
        assert heur.dickman_rho(u) == pytest.approx(1 - math.log(u), rel=1e-12)
    for u in (2.0, 2.25, 2.5, 2.9, 3.0):
        assert heur.dickman_rho(u) == pytest.approx(rho_closed_form(u), rel=1e-10)


def test_dickman_tabulated_values():
    # standard tabulated values of Dickman's function
    assert heur.dickman_rho(3.0) == pytest.approx(0.0486083882911316, rel=1e-10)
    assert heur.dickman_rho(10.0) == pytest.approx(2.77017183772596e-11, rel=1e-6)


def test_dickman_step_halving():
    for u in (4.5, 7.3, 10.0):
        coarse = heur.dickman_rho(u, step=2e-4)
        assert heur.dickman_rho(u) == pytest.approx(coarse, rel=1e-9)


def test_dickman_monotone_positive():
    us = np.linspace(1.0, 30.0, 2901)
    vals = [heur.dickman_rho(float(u)) for u in us]
    assert all(v > 0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_dickman_delay_equation():
    # u rho'(u) = -rho(u - 1), checked by central differences
    for u in (1.7, 3.4, 6.2):
        h = 1e-4
        deriv = (heur.dickman_rho(u + h) - heur.dickman_rho(u - h)) / (2 * h)
        assert u * deriv == pytest.approx(-heur.dickman_rho(u - 1), rel=1e-6)


def test_dickman_domain():
    with pytest.raises(ValueError):
        heur.dickman_rho(-0.1)
    with pytest.raises(ValueError):
        heur.dickman_rho(30.5)
    with pytest.raises(ValueError):
        heur.dickman_rho(2.0, step=0.3)


def test_psi_three_quarters():
    psi = heur.psi_three_quarters()
    assert psi == pytest.approx(0.866468, abs=5e-4)
    assert abs(heur.psi_three_quarters(25.0) - psi) < 1e-8
    # integrand on [1/7, 1] is 1/(1+y), whose integral is log(7/4)
    assert heur.dickman_rho(1 / 7) / (1 + 1 / 7) == pytest.approx(7 / 8)


def test_g1_g2():
    for n in range(3, 8):
        base = 2 * (nt.tau(n - 1) - 1)
        assert heur.g1(n) == base and heur.g2(n) == base
    # tau(99) = 6, tau(199) = 2, tau(299) = 4, tau(399) = 8
    taus = {2: 2, 3: 4, 4: 8}
    assert heur.g1(100) == pytest.approx(10 + 2 * sum(j**-1.5 * t for j, t in taus.items()), rel=1e-14)
    assert heur.g2(100) == pytest.approx(10 + 2 * math.e * sum(math.exp(-j) * t for j, t in taus.items()), rel=1e-14)


@given(st.integers(3, 10**6))
def test_g_bounds(n):
    base = 2 * (nt.tau(n - 1) - 1)
    assert math.isfinite(heur.g1(n)) and heur.g1(n) >= base
    assert math.isfinite(heur.g2(n)) and heur.g2(n) >= base
