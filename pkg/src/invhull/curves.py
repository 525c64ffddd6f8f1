"""Convex hulls of polynomial graphs y = g(x) mod n.

For g of degree 2 or 3 the point set F_n = {(x, g(x) mod n)} has exactly n
points, and the same random-polygon estimate as for G_n applies with
phi(n) replaced by n.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import rng
from .geometry import Point, convex_hull_arrays
from .heuristic import heuristic_count
from .stats import fit_normal, ks_statistic, normal_cdf

DEFAULT_RANGE = (10**4, 3 * 10**5)
DEFAULT_PRIME_RANGE = (7919, 611953)
CSV_HEADER = "index,n,degree,a,b,c,d,points,w,h,rel_diff"
# x * acc stays below 2^63 while n < 2^31
_INT64_MODULUS_LIMIT = 2**31


@dataclass(frozen=True)
class CurveSpec:
    """y = a x^2 + b x + c (degree 2) or a x^3 + b x^2 + c x + d (degree 3), mod n."""

    degree: int
    coefficients: tuple[int, ...]
    n: int
    is_prime_modulus: bool = False

    def __post_init__(self):
        if self.degree not in (2, 3):
            raise ValueError(f"degree must be 2 or 3, got {self.degree}")
        if len(self.coefficients) != self.degree + 1:
            raise ValueError(f"degree {self.degree} needs {self.degree + 1} coefficients")
        if self.n < 2:
            raise ValueError(f"modulus must be >= 2, got {self.n}")
        object.__setattr__(self, "coefficients", tuple(c % self.n for c in self.coefficients))


@dataclass(frozen=True)
class CurveRecord:
    spec: CurveSpec
    point_count: int
    w: int
    h: float
    degenerate: bool

    @property
    def rel_diff(self) -> float:
        return (self.w - self.h) / self.h


def curve_values(spec: CurveSpec, xs: Sequence[int] | None = None) -> np.ndarray:
    """g(x) mod n for x = 0..n-1 (or the given ``xs``), by Horner's rule reduced at every step."""
    n = spec.n
    dtype = np.int64 if n < _INT64_MODULUS_LIMIT else object
    if xs is None:
        x = np.arange(n, dtype=np.int64).astype(dtype)
    else:
        x = np.array([int(v) for v in xs], dtype=dtype)
    acc = np.full(x.size, spec.coefficients[0], dtype=dtype)
    for c in spec.coefficients[1:]:
        acc = (acc * x + c) % n
    return acc


def curve_points(spec: CurveSpec) -> list[Point]:
    ys = curve_values(spec)
    return [(x, int(y)) for x, y in enumerate(ys.tolist())]


def curve_hull(spec: CurveSpec) -> list[Point]:
    ys = curve_values(spec)
    return convex_hull_arrays(np.arange(spec.n, dtype=np.int64), ys)


def curve_hull_count(spec: CurveSpec) -> CurveRecord:
    if spec.n < 3:
        raise ValueError(f"curve hulls need n >= 3, got {spec.n}")
    verts = curve_hull(spec)
    return CurveRecord(
        spec=spec,
        point_count=spec.n,
        w=len(verts),
        h=heuristic_count(spec.n),
        degenerate=len(verts) <= 2,
    )


def random_spec(gen: np.random.Generator, degree: int, lo: int, hi: int, primes: bool) -> CurveSpec:
    n = rng.uniform_prime(gen, lo, hi) if primes else rng.uniform_int(gen, lo, hi)
    lead = rng.uniform_int(gen, 1, n - 1)
    rest = [rng.uniform_int(gen, 0, n - 1) for _ in range(degree)]
    return CurveSpec(degree, (lead, *rest), n, primes)


def _sample(args: tuple[int, int, int, int, int, bool]) -> CurveRecord:
    seed, index, degree, lo, hi, primes = args
    spec = random_spec(rng.stream(seed, index), degree, lo, hi, primes)
    return curve_hull_count(spec)


@dataclass(frozen=True)
class CurveSummary:
    seed: int
    degree: int
    primes: bool
    count: int
    degenerate: int
    mean: float
    std: float
    min: float
    max: float
    sigma_f: float
    ks: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def summarize(records: Sequence[CurveRecord], seed: int, degree: int, primes: bool) -> CurveSummary:
    """Statistics of rel_diff over the non-degenerate records.

    sigma_f is the root mean square of w/h - 1; ks compares rel_diff with
    the mean-zero normal of that standard deviation.
    """
    rel = np.array([r.rel_diff for r in records if not r.degenerate], dtype=np.float64)
    if rel.size == 0:
        raise ValueError("no non-degenerate records to summarize")
    sigma = fit_normal(rel).sigma
    return CurveSummary(
        seed=seed,
        degree=degree,
        primes=primes,
        count=len(records),
        degenerate=len(records) - int(rel.size),
        mean=float(rel.mean()),
        std=float(rel.std()),
        min=float(rel.min()),
        max=float(rel.max()),
        sigma_f=sigma,
        ks=ks_statistic(rel, lambda z: normal_cdf(z, sigma)),
    )


def run_curve_experiment(
    count: int,
    lo: int | None = None,
    hi: int | None = None,
    degree: int = 2,
    seed: int = 0,
    primes: bool = False,
    workers: int = 1,
) -> tuple[list[CurveRecord], CurveSummary]:
    """Sample ``count`` random curves and hull each one.

    The modulus is uniform on [lo, hi] (or uniform over the primes there);
    the leading coefficient is uniform on [1, n-1], the others on [0, n-1].
    Records come back in index order whatever the worker count.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if degree not in (2, 3):
        raise ValueError(f"degree must be 2 or 3, got {degree}")
    default = DEFAULT_PRIME_RANGE if primes else DEFAULT_RANGE
    lo = default[0] if lo is None else lo
    hi = default[1] if hi is None else hi
    if not 3 <= lo <= hi:
        raise ValueError(f"need 3 <= lo <= hi, got [{lo}, {hi}]")
    if primes:
        rng.check_prime_range(lo, hi)
    jobs = [(seed, i, degree, lo, hi, primes) for i in range(count)]
    if workers <= 1:
        records = [_sample(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_sample, jobs, chunksize=max(1, count // (4 * workers))))
    return records, summarize(records, seed, degree, primes)


def csv_row(index: int, rec: CurveRecord) -> str:
    coeffs = [str(c) for c in rec.spec.coefficients]
    if rec.spec.degree == 2:
        coeffs.append("")
    return ",".join(
        [str(index), str(rec.spec.n), str(rec.spec.degree), *coeffs,
         str(rec.point_count), str(rec.w), f"{rec.h:.6f}", f"{rec.rel_diff:.6f}"]
    )


def write_csv(path, records: Sequence[CurveRecord]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for i, rec in enumerate(records):
            fh.write(csv_row(i, rec) + "\n")
