"""Heuristic vertex counts and the analytic constants around them.

The random-polygon model predicts (8/3)(log k + gamma - log 2) vertices for
the hull of k uniform points in a square; with k = phi(n) this is the
estimate ``h_of_n``.  Averaging log phi(n) over n <= N brings in
eta = sum_p log(1 - 1/p)/p, giving ``H_of_N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context, Decimal, localcontext
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate, special

from . import numtheory as nt
from .hull import compute_hull

EULER_GAMMA = 0.57721566490153286061
LOG2 = math.log(2.0)
SQUARE_CONSTANT = -8.0 / 3.0 * LOG2
DEFAULT_ETA_BOUND = 10**7
DICKMAN_MAX = 30.0
DICKMAN_STEP = 1e-4


def h_of_n(n: int) -> float:
    """Predicted vertex count of the hull of G_n: (8/3)(log phi(n) + gamma - log 2)."""
    return heuristic_count(nt.euler_phi(n))


def heuristic_count(points: int) -> float:
    """(8/3)(log k + gamma) + c for k uniform points in the unit square."""
    return 8.0 / 3.0 * (math.log(points) + EULER_GAMMA) + SQUARE_CONSTANT


@lru_cache(maxsize=8)
def eta_constant(prime_bound: int = DEFAULT_ETA_BOUND) -> float:
    """sum over primes of log(1 - 1/p)/p.

    Primes up to ``prime_bound`` are summed directly.  Beyond it each term is
    -1/p^2 to leading order, and with prime density 1/log t the tail is
    -int_B^inf dt/(t^2 log t) = -E1(log B).
    """
    if prime_bound < 2:
        raise ValueError(f"prime_bound must be >= 2, got {prime_bound}")
    p = nt.primes_upto(prime_bound).astype(np.float64)
    terms = np.log1p(-1.0 / p) / p
    head = math.fsum(terms.tolist())
    tail = -float(special.exp1(math.log(prime_bound)))
    return head + tail


def eta_partial_sum(primes: Iterable[int]) -> float:
    return math.fsum(math.log1p(-1.0 / p) / p for p in primes)


def H_intercept(eta: float | None = None) -> float:
    if eta is None:
        eta = eta_constant()
    return 8.0 / 3.0 * (EULER_GAMMA + eta - 1.0 - LOG2)


def H_of_N(N: int, eta: float | None = None) -> float:
    """Heuristic average of v(n) over 2 <= n <= N."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    return 8.0 / 3.0 * math.log(N) + H_intercept(eta)


def log_phi_average(N: int) -> float:
    """(1/N) sum_{n <= N} log phi(n), summed with compensation."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    phi = nt.totients_upto(N)[1:].astype(np.float64)
    return math.fsum(np.log(phi).tolist()) / N


def delta_constant() -> float:
    return 1.0 - (1.0 + math.log(LOG2)) / LOG2


def V_average(N: int, algorithm: str = "auto") -> float:
    """Mean of v(n) over n = 2..N."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    return sum(compute_hull(n, algorithm).v for n in range(2, N + 1)) / (N - 1)


# --- least squares in log N -----------------------------------------------


@dataclass(frozen=True)
class LogFit:
    slope: float
    intercept: float
    sample_count: int
    residual_rms: float

    def __call__(self, N: float) -> float:
        return self.slope * math.log(N) + self.intercept


def least_squares_log_fit(samples: Sequence[tuple[float, float]]) -> LogFit:
    """Fit V ~ slope * log N + intercept by ordinary least squares."""
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    x = np.log(np.array([s[0] for s in samples], dtype=np.float64))
    y = np.array([s[1] for s in samples], dtype=np.float64)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx == 0.0:
        raise ValueError("all N values are equal; the fit is singular")
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (slope * x + intercept)
    return LogFit(slope, intercept, len(samples), float(np.sqrt(np.mean(resid**2))))


# --- Dickman rho ------------------------------------------------------------


@lru_cache(maxsize=4)
def _dickman_table(step: float = DICKMAN_STEP) -> np.ndarray:
    """rho on the grid 0, step, ..., DICKMAN_MAX.

    On [k, k+1], rho(u) = rho(k) - int_k^u rho(t-1)/t dt with the integrand
    taken from the previous unit interval.  Even nodes use composite
    Simpson, odd nodes add the one-panel rule h/12 (5 f0 + 8 f1 - f2).

    Rounding errors made while rho is near 1 decay only like 1/u, which in
    double precision would swamp rho(10) ~ 3e-11.  The recursion therefore
    runs in 64-digit decimal arithmetic and is rounded to float at the end.
    """
    per_unit = round(1.0 / step)
    if abs(per_unit * step - 1.0) > 1e-12 or per_unit % 2:
        raise ValueError(f"step must be 1/(2k), got {step}")
    with localcontext(Context(prec=64)):
        h = Decimal(1) / per_unit
        h3, h12 = h / 3, h / 12
        rho = [Decimal(1)] * (per_unit + 1)
        for k in range(1, int(DICKMAN_MAX)):
            prev = k * per_unit - per_unit
            f = [rho[prev + i] / (k + i * h) for i in range(per_unit + 1)]
            anchor = rho[-1]
            acc = Decimal(0)
            for m in range(0, per_unit, 2):
                f0, f1, f2 = f[m], f[m + 1], f[m + 2]
                rho.append(anchor - (acc + h12 * (5 * f0 + 8 * f1 - f2)))
                acc += h3 * (f0 + 4 * f1 + f2)
                rho.append(anchor - acc)
    return np.array([float(r) for r in rho])


def dickman_rho(u: float, step: float = DICKMAN_STEP) -> float:
    """Dickman's function: rho = 1 on [0, 1] and u rho'(u) = -rho(u - 1) beyond.

    Between grid nodes the table is interpolated with cubic Hermite
    polynomials using the exact derivative -rho(u-1)/u.
    """
    if not 0.0 <= u <= DICKMAN_MAX:
        raise ValueError(f"dickman_rho defined here for 0 <= u <= {DICKMAN_MAX}, got {u}")
    if u <= 1.0:
        return 1.0
    table = _dickman_table(step)
    per_unit = round(1.0 / step)
    i = min(int(u / step), table.size - 2)
    t = u / step - i
    u0, u1 = i * step, (i + 1) * step
    r0, r1 = table[i], table[i + 1]
    d0 = -_rho_lag(table, i - per_unit) / u0
    d1 = -_rho_lag(table, i + 1 - per_unit) / u1
    h00 = 2 * t**3 - 3 * t**2 + 1
    h10 = t**3 - 2 * t**2 + t
    h01 = -2 * t**3 + 3 * t**2
    h11 = t**3 - t**2
    return float(h00 * r0 + h10 * step * d0 + h01 * r1 + h11 * step * d1)


def _rho_lag(table: np.ndarray, i: int) -> float:
    return 1.0 if i <= 0 else float(table[i])


def psi_three_quarters(upper: float = 20.0) -> float:
    """Limiting share of k with T(k) <= k^(3/4): int_{1/7}^inf rho(y)/(1+y) dy.

    rho = 1 below 1 so that piece is log(7/4) in closed form; the rest is
    integrated interval by interval with adaptive quadrature up to ``upper``.
    """
    total = math.log(2.0) - math.log(8.0 / 7.0)
    k = 1.0
    while k < upper:
        hi = min(k + 1.0, upper)
        val, _ = integrate.quad(lambda y: dickman_rho(y) / (1.0 + y), k, hi, epsabs=1e-13, epsrel=1e-11)
        total += val
        k = hi
    return total


# --- weighted divisor averages ---------------------------------------------


def _level_sum(n: int, weight) -> float:
    return math.fsum(weight(j) * nt.tau(j * n - 1) for j in range(2, int(math.log(n)) + 1))


def g1(n: int) -> float:
    """2(tau(n-1) - 1) + 2 sum_{2 <= j <= log n} j^(-3/2) tau(jn - 1)."""
    base = 2 * (nt.tau(n - 1) - 1)
    return base + 2.0 * _level_sum(n, lambda j: j**-1.5)


def g2(n: int) -> float:
    """2(tau(n-1) - 1) + 2e sum_{2 <= j <= log n} e^(-j) tau(jn - 1)."""
    base = 2 * (nt.tau(n - 1) - 1)
    return base + 2.0 * math.e * _level_sum(n, lambda j: math.exp(-j))
