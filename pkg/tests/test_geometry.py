import numpy as np
from hypothesis import given, strategies as st
from scipy.spatial import ConvexHull

from invhull.geometry import convex_hull, convex_hull_arrays, cross, is_strictly_convex, strictly_inside

points = st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=1, max_size=60)


def test_square_with_edge_points():
    pts = [(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 1), (2, 1)]
    assert convex_hull(pts) == [(0, 0), (2, 0), (2, 2), (0, 2)]


def test_collinear_and_single():
    assert convex_hull([(3, 3)]) == [(3, 3)]
    assert convex_hull([(1, 1), (2, 2), (3, 3)]) == [(1, 1), (3, 3)]
    assert convex_hull([(1, 1), (1, 1)]) == [(1, 1)]


def test_cross_sign():
    assert cross((0, 0), (1, 0), (0, 1)) == 1
    assert cross((0, 0), (0, 1), (1, 0)) == -1
    assert cross((0, 0), (1, 1), (2, 2)) == 0


@given(points)
def test_hull_is_strictly_convex_and_contains_everything(pts):
    hull = convex_hull(pts)
    assert set(hull) <= set(pts)
    if len(hull) >= 3:
        assert is_strictly_convex(hull)
        for p in pts:
            # no input point lies strictly outside any edge
            for a, b in zip(hull, hull[1:] + hull[:1]):
                assert cross(a, b, p) >= 0


@given(points)
def test_hull_matches_qhull(pts):
    arr = np.array(sorted(set(pts)))
    if len(arr) < 3 or np.linalg.matrix_rank(arr[1:] - arr[0]) < 2:
        return
    q = ConvexHull(arr)
    assert set(convex_hull(pts)) == set(map(tuple, arr[q.vertices].tolist()))


@given(points)
def test_array_hull_equals_reference(pts):
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    assert convex_hull_arrays(xs, ys) == convex_hull(pts)


def test_array_hull_large_cloud():
    rng = np.random.default_rng(3)
    xs = rng.integers(0, 10**6, 50000)
    ys = rng.integers(0, 10**6, 50000)
    assert convex_hull_arrays(xs, ys) == convex_hull(zip(xs.tolist(), ys.tolist()))


def test_strictly_inside():
    sq = [(0, 0), (4, 0), (4, 4), (0, 4)]
    assert strictly_inside(sq, (2, 2))
    assert not strictly_inside(sq, (0, 2))
    assert not strictly_inside(sq, (5, 2))
