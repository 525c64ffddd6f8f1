"""Histograms and one-dimensional distribution fits for experiment outputs.

Lognormal and loglogistic models are fitted to ln(x - shift), where they
reduce to the normal and logistic families.  Goodness of fit is the
Kolmogorov-Smirnov distance between the data and the fitted CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

MODELS = ("lognormal", "loglogistic", "normal")
MIN_FIT_SAMPLES = 10
MAX_AUTO_BINS = 1000
NEWTON_TOL = 1e-8
NEWTON_MAX_ITER = 200
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


class FitError(ValueError):
    """Raised when a fit has no valid or no convergent solution."""


# --- histograms ---------------------------------------------------------------


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts: tuple[int, ...]
    underflow: int
    overflow: int
    total: int
    min: float
    max: float

    @property
    def omitted(self) -> int:
        return self.underflow + self.overflow

    def to_json(self) -> dict:
        return {
            "edges": list(self.edges),
            "counts": list(self.counts),
            "underflow": self.underflow,
            "overflow": self.overflow,
            "min": self.min,
            "max": self.max,
            "omitted": self.omitted,
        }


def _fd_edges(x: np.ndarray) -> np.ndarray:
    """Freedman-Diaconis edges; Sturges when the IQR is zero or the count explodes."""
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        return np.array([lo, lo + 1.0])
    q75, q25 = np.percentile(x, [75, 25])
    width = 2.0 * (q75 - q25) / x.size ** (1 / 3)
    span = hi - lo
    if width > 0 and span / width <= MAX_AUTO_BINS:
        bins = max(1, math.ceil(span / width))
    else:
        bins = math.ceil(math.log2(x.size)) + 1
    return np.linspace(lo, hi, bins + 1)


def histogram(
    data: Sequence[float],
    bins: int | None = None,
    edges: Sequence[float] | None = None,
) -> Histogram:
    """Bin ``data`` into half-open bins [e_i, e_{i+1}).

    With neither ``bins`` nor ``edges`` the Freedman-Diaconis rule picks the
    width.  Generated edges are nudged so the maximum falls in the last bin;
    with explicit edges anything outside [e_0, e_last) is counted as under or
    overflow, which is how long right tails are truncated.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.size == 0:
        raise ValueError("histogram needs at least one sample")
    if edges is not None:
        e = np.asarray(edges, dtype=np.float64)
        if e.size < 2 or not np.all(np.diff(e) > 0):
            raise ValueError("edges must be strictly increasing with at least two entries")
    else:
        if bins is None:
            e = _fd_edges(x)
        else:
            if bins < 1:
                raise ValueError(f"bins must be >= 1, got {bins}")
            lo, hi = float(x.min()), float(x.max())
            if hi == lo:
                hi = lo + 1.0
            e = np.linspace(lo, hi, bins + 1)
        e[-1] = np.nextafter(max(e[-1], x.max()), np.inf)
    idx = np.searchsorted(e, x, side="right") - 1
    under = int(np.count_nonzero(idx < 0))
    over = int(np.count_nonzero(idx >= e.size - 1))
    inside = idx[(idx >= 0) & (idx < e.size - 1)]
    counts = np.bincount(inside, minlength=e.size - 1)
    return Histogram(
        edges=tuple(float(v) for v in e),
        counts=tuple(int(c) for c in counts),
        underflow=under,
        overflow=over,
        total=int(x.size),
        min=float(x.min()),
        max=float(x.max()),
    )


# --- densities and distribution functions --------------------------------------


def _check_sigma(sigma: float) -> None:
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")


def _shifted_log(x: float, shift: float) -> float:
    if not x > shift:
        raise ValueError(f"x must exceed the shift {shift}, got {x}")
    return math.log(x - shift)


def lognormal_pdf(x: float, mu: float, sigma: float, shift: float = 0.0) -> float:
    _check_sigma(sigma)
    y = _shifted_log(x, shift)
    z = (y - mu) / sigma
    return math.exp(-0.5 * z * z) / (_SQRT2PI * sigma * (x - shift))


def loglogistic_pdf(x: float, mu: float, sigma: float, shift: float = 0.0) -> float:
    _check_sigma(sigma)
    y = _shifted_log(x, shift)
    z = -abs(y - mu) / sigma  # symmetric, so evaluate on the side where exp cannot overflow
    e = math.exp(z)
    return e / (sigma * (x - shift) * (1.0 + e) ** 2)


def normal_cdf(z: float, sigma: float = 1.0) -> float:
    """CDF of the mean-zero normal with standard deviation ``sigma``."""
    _check_sigma(sigma)
    return 0.5 * math.erfc(-z / (sigma * _SQRT2))


def logistic_cdf(z: float, sigma: float = 1.0) -> float:
    _check_sigma(sigma)
    t = z / sigma
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def ks_statistic(data: Sequence[float], cdf: Callable[[float], float]) -> float:
    """sup |F_m(x) - cdf(x)| for the empirical CDF F_m of ``data``.

    ``cdf`` is taken to be continuous; tied observations form one jump.
    """
    x = np.sort(np.asarray(data, dtype=np.float64))
    m = x.size
    if m == 0:
        raise ValueError("ks_statistic needs at least one sample")
    values, counts = np.unique(x, return_counts=True)
    above = np.cumsum(counts) / m
    below = above - counts / m
    f = np.array([cdf(float(v)) for v in values])
    return float(min(1.0, max(np.max(above - f), np.max(f - below), 0.0)))


# --- fits -----------------------------------------------------------------------


@dataclass(frozen=True)
class FitResult:
    model: str
    mu: float
    sigma: float
    shift: float
    gof: float

    def cdf(self, x: float) -> float:
        if self.model == "normal":
            return normal_cdf(x - self.mu, self.sigma)
        if x <= self.shift:
            return 0.0
        z = math.log(x - self.shift) - self.mu
        if self.model == "lognormal":
            return normal_cdf(z, self.sigma)
        return logistic_cdf(z, self.sigma)

    def pdf(self, x: float) -> float:
        if self.model == "normal":
            z = (x - self.mu) / self.sigma
            return math.exp(-0.5 * z * z) / (_SQRT2PI * self.sigma)
        if x <= self.shift:
            return 0.0
        if self.model == "lognormal":
            return lognormal_pdf(x, self.mu, self.sigma, self.shift)
        return loglogistic_pdf(x, self.mu, self.sigma, self.shift)

    def to_json(self) -> dict:
        return {"model": self.model, "mu": self.mu, "sigma": self.sigma, "shift": self.shift, "gof": self.gof}


def _log_data(data: Sequence[float], shift: float) -> np.ndarray:
    x = np.asarray(data, dtype=np.float64)
    if x.size < MIN_FIT_SAMPLES:
        raise FitError(f"need at least {MIN_FIT_SAMPLES} samples, got {x.size}")
    if not np.all(x > shift):
        raise FitError(f"all samples must exceed the shift {shift}")
    y = np.log(x - shift)
    if np.ptp(y) == 0.0:
        raise FitError("data are constant; the scale would be zero")
    return y


def fit_lognormal(data: Sequence[float], shift: float = 0.0) -> FitResult:
    """Maximum likelihood: mean and (ddof=0) standard deviation of ln(x - shift)."""
    y = _log_data(data, shift)
    mu, sigma = float(y.mean()), float(y.std())
    res = FitResult("lognormal", mu, sigma, shift, 0.0)
    return FitResult("lognormal", mu, sigma, shift, ks_statistic(data, res.cdf))


def _logistic_newton(y: np.ndarray) -> tuple[float, float]:
    """Logistic MLE of (location, scale) by damped Newton on the mean log-likelihood."""

    def loglik(mu: float, s: float) -> float:
        z = (y - mu) / s
        return float(np.mean(-z - 2.0 * np.logaddexp(0.0, -z))) - math.log(s)

    mu = float(np.median(y))
    s = float(y.std()) * math.sqrt(3.0) / math.pi
    current = loglik(mu, s)
    for _ in range(NEWTON_MAX_ITER):
        z = (y - mu) / s
        th = np.tanh(0.5 * z)
        sech2 = 1.0 - th * th
        g_mu = float(np.mean(th)) / s
        g_s = (float(np.mean(z * th)) - 1.0) / s
        if math.hypot(g_mu, g_s) < NEWTON_TOL:
            return mu, s
        s2 = s * s
        h_mm = -float(np.mean(sech2)) / (2.0 * s2)
        h_ms = -float(np.mean(th + 0.5 * z * sech2)) / s2
        h_ss = float(np.mean(1.0 - 2.0 * z * th - 0.5 * z * z * sech2)) / s2
        det = h_mm * h_ss - h_ms * h_ms
        if det > 0 and h_mm < 0:
            d_mu = -(h_ss * g_mu - h_ms * g_s) / det
            d_s = -(h_mm * g_s - h_ms * g_mu) / det
        else:
            # Hessian not negative definite: plain gradient ascent step
            d_mu, d_s = g_mu * s2, g_s * s2
        step = 1.0
        while step > 1e-12:
            new_mu, new_s = mu + step * d_mu, s + step * d_s
            if new_s > 0:
                new = loglik(new_mu, new_s)
                if new >= current:
                    break
            step *= 0.5
        else:
            raise FitError("loglogistic fit stalled before converging")
        mu, s, current = new_mu, new_s, new
    raise FitError(f"loglogistic fit did not converge in {NEWTON_MAX_ITER} iterations")


def fit_loglogistic(data: Sequence[float], shift: float = 0.0) -> FitResult:
    y = _log_data(data, shift)
    mu, sigma = _logistic_newton(y)
    res = FitResult("loglogistic", mu, sigma, shift, 0.0)
    return FitResult("loglogistic", mu, sigma, shift, ks_statistic(data, res.cdf))


def fit_normal(data: Sequence[float]) -> FitResult:
    """Mean-zero normal whose sigma is the root mean square of the data."""
    x = np.asarray(data, dtype=np.float64)
    if x.size == 0:
        raise FitError("need at least one sample")
    sigma = float(np.sqrt(np.mean(x * x)))
    if sigma == 0.0:
        raise FitError("all samples are zero; sigma would be zero")
    res = FitResult("normal", 0.0, sigma, 0.0, 0.0)
    return FitResult("normal", 0.0, sigma, 0.0, ks_statistic(x, res.cdf))


def fit(data: Sequence[float], model: str, shift: float = 0.0) -> FitResult:
    if model == "lognormal":
        return fit_lognormal(data, shift)
    if model == "loglogistic":
        return fit_loglogistic(data, shift)
    if model == "normal":
        return fit_normal(data)
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
