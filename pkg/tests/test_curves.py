import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from invhull import curves as C
from invhull import rng
from invhull.geometry import convex_hull
from invhull.heuristic import heuristic_count


def test_curve_points_square():
    spec = C.CurveSpec(2, (1, 0, 0), 5)
    assert C.curve_points(spec) == [(0, 0), (1, 1), (2, 4), (3, 4), (4, 1)]
    rec = C.curve_hull_count(spec)
    assert set(C.curve_hull(spec)) == {(0, 0), (2, 4), (3, 4), (4, 1)}
    assert rec.w == 4 and rec.point_count == 5 and not rec.degenerate


def test_spec_reduces_and_validates():
    spec = C.CurveSpec(3, (8, -1, 12, 5), 7)
    assert spec.coefficients == (1, 6, 5, 5)
    with pytest.raises(ValueError):
        C.CurveSpec(4, (1, 1, 1, 1, 1), 7)
    with pytest.raises(ValueError):
        C.CurveSpec(2, (1, 1), 7)


def test_horner_matches_direct_evaluation():
    spec = C.CurveSpec(3, (123, 4567, 89, 1011), 30011)
    a, b, c, d = spec.coefficients
    assert [y for _, y in C.curve_points(spec)] == [(a * x**3 + b * x**2 + c * x + d) % 30011 for x in range(30011)]


def test_large_modulus_uses_exact_integers():
    n = 2**31 + 11
    spec = C.CurveSpec(3, (n - 1, n - 2, n - 3, 5), n)
    xs = [0, 1, 12345, n - 1]
    ys = C.curve_values(spec, xs)
    for x, y in zip(xs, ys):
        assert y == (spec.coefficients[0] * x**3 + spec.coefficients[1] * x**2 + spec.coefficients[2] * x + 5) % n


def test_constant_curve_is_degenerate():
    rec = C.curve_hull_count(C.CurveSpec(2, (0, 0, 3), 11))
    assert rec.degenerate and rec.w == 2


def test_rel_diff_identity():
    rec = C.curve_hull_count(C.CurveSpec(2, (3, 1, 4), 1009))
    assert rec.h == heuristic_count(1009)
    assert rec.rel_diff == pytest.approx(rec.w / rec.h - 1, rel=1e-14)


def test_hull_matches_oracles_on_seeded_specs():
    for i in range(100):
        gen = rng.stream(11, i)
        degree = 2 + i % 2
        spec = C.random_spec(gen, degree, 5, 2000, primes=False)
        pts = C.curve_points(spec)
        assert len(pts) == spec.n and all(0 <= y < spec.n for _, y in pts)
        hull = C.curve_hull(spec)
        assert hull == convex_hull(pts)
        arr = np.array(pts)
        assert set(hull) == set(map(tuple, arr[ConvexHull(arr).vertices].tolist()))
        assert len(hull) >= 3


def test_random_spec_conventions():
    for i in range(200):
        spec = C.random_spec(rng.stream(3, i), 3, 100, 200, primes=False)
        assert 100 <= spec.n <= 200
        assert 1 <= spec.coefficients[0] <= spec.n - 1
    for i in range(50):
        spec = C.random_spec(rng.stream(3, i), 2, 7919, 611953, primes=True)
        assert spec.is_prime_modulus and all(spec.n % p for p in range(2, math.isqrt(spec.n) + 1))


def test_experiment_deterministic_across_workers():
    r1, s1 = C.run_curve_experiment(40, 1000, 5000, degree=2, seed=9, workers=1)
    r2, s2 = C.run_curve_experiment(40, 1000, 5000, degree=2, seed=9, workers=3)
    assert r1 == r2 and s1 == s2
    r3, _ = C.run_curve_experiment(40, 1000, 5000, degree=2, seed=10)
    assert r3 != r1


def test_summary_fields():
    records, s = C.run_curve_experiment(60, 1000, 5000, degree=3, seed=1)
    rel = np.array([r.rel_diff for r in records])
    assert s.count == 60 and s.degenerate == 0 and s.seed == 1
    assert s.mean == pytest.approx(rel.mean()) and s.min == rel.min() and s.max == rel.max()
    assert s.sigma_f == pytest.approx(math.sqrt(np.mean(rel**2)))
    assert 0 <= s.ks <= 1


def test_experiment_errors():
    with pytest.raises(ValueError):
        C.run_curve_experiment(0)
    with pytest.raises(ValueError):
        C.run_curve_experiment(5, 90, 96, primes=True)
    with pytest.raises(ValueError):
        C.run_curve_experiment(5, degree=4)


def test_csv_format(tmp_path):
    records, _ = C.run_curve_experiment(3, 1000, 2000, degree=2, seed=0)
    path = tmp_path / "c.csv"
    C.write_csv(path, records)
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "index,n,degree,a,b,c,d,points,w,h,rel_diff"
    fields = lines[1].split(",")
    assert len(fields) == 11 and fields[6] == ""
    assert len(fields[9].split(".")[1]) == 6 and len(fields[10].split(".")[1]) == 6
