"""Exact planar convex hulls of integer point sets.

Every orientation test is an integer cross product, so there is no rounding
at any coordinate size.  Vertices are strictly extreme points: lattice points
lying in the interior of a hull edge are dropped.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

Point = tuple[int, int]

# int64 cross products stay exact while |coordinate| < 2**31
_NUMPY_COORD_LIMIT = 2**31


def cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Andrew's monotone chain.

    Returns the strictly extreme points in counter-clockwise order, starting
    from the lexicographically smallest point.  A collinear set yields its
    two endpoints, a single point yields itself.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def is_strictly_convex(poly: Sequence[Point]) -> bool:
    """True if ``poly`` (CCW) turns strictly left at every vertex."""
    k = len(poly)
    if k < 3:
        return True
    return all(cross(poly[i - 2], poly[i - 1], poly[i]) > 0 for i in range(k))


def strictly_inside(poly: Sequence[Point], p: Point) -> bool:
    """True if ``p`` lies in the open interior of the CCW convex polygon ``poly``."""
    if len(poly) < 3:
        return False
    return all(cross(poly[i - 1], poly[i], p) > 0 for i in range(len(poly)))


_DIRECTIONS = [
    (1, 0), (2, 1), (1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1), (-2, 1),
    (-1, 0), (-2, -1), (-1, -1), (-1, -2), (0, -1), (1, -2), (1, -1), (2, -1),
]


def convex_hull_arrays(xs: np.ndarray, ys: np.ndarray) -> list[Point]:
    """Same result as :func:`convex_hull` for large point clouds.

    Points strictly inside the polygon spanned by the extremes in sixteen
    fixed directions cannot be hull vertices; they are discarded with
    vectorised int64 tests before the exact monotone chain runs on the rest.
    """
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    if xs.size == 0:
        return []
    bound = max(int(np.abs(xs).max()), int(np.abs(ys).max()))
    if bound >= _NUMPY_COORD_LIMIT // 4:
        return convex_hull(zip(xs.tolist(), ys.tolist()))
    seeds = set()
    for dx, dy in _DIRECTIONS:
        i = int(np.argmax(dx * xs + dy * ys))
        seeds.add((int(xs[i]), int(ys[i])))
    inner = convex_hull(seeds)
    keep = np.ones(xs.size, dtype=bool)
    if len(inner) >= 3:
        inside = np.ones(xs.size, dtype=bool)
        for (x0, y0), (x1, y1) in zip(inner, inner[1:] + inner[:1]):
            inside &= (x1 - x0) * (ys - y0) - (y1 - y0) * (xs - x0) > 0
        keep = ~inside
    return convex_hull(zip(xs[keep].tolist(), ys[keep].tolist()))
