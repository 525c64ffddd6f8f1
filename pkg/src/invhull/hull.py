"""Convex closure of the graph of modular inversions.

``G_n`` is the set of lattice points (a, b) with ab = 1 (mod n) and
1 <= a, b <= n-1.  Three independent routes compute its convex hull:

* :func:`brute_force_hull` materialises every point and runs a monotone chain;
* :func:`search_hull` walks the hull chain inside the triangle
  (0,0), (0,n), (n/2,n/2) one candidate abscissa at a time;
* :func:`factor_hull` only looks at points on the hyperbola arcs
  x(n-y) = jn-1 for levels j up to a bound derived from the divisors of n-1.

The triangle chain is the part of the hull the last two routes compute; the
rest follows from the symmetries (a,b) -> (b,a) and (a,b) -> (n-b,n-a).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import numtheory as nt
from .geometry import Point, convex_hull, strictly_inside

DEGENERATE_MODULI = frozenset({2, 3, 4, 6, 8, 12, 24})
BRUTE_FORCE_LIMIT = 10**6
ALGORITHMS = ("auto", "search", "factor", "brute")


@dataclass(frozen=True)
class HullResult:
    n: int
    vertices: tuple[Point, ...]
    degenerate: bool
    algorithm: str
    elapsed: float = field(default=0.0, compare=False)

    @property
    def v(self) -> int:
        return len(self.vertices)

    @property
    def max_diff(self) -> int:
        # |a - b| is convex, so its maximum over G_n sits at a hull vertex
        return max(abs(a - b) for a, b in self.vertices)

    def vertex_set(self) -> frozenset[Point]:
        return frozenset(self.vertices)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "v": self.v,
            "degenerate": self.degenerate,
            "algorithm": self.algorithm,
            "vertices": [[a, b] for a, b in self.vertices],
        }


@dataclass(frozen=True)
class TriangleChain:
    n: int
    points: tuple[Point, ...]

    @property
    def top(self) -> Point:
        return self.points[-1]


def _check_modulus(n: int) -> None:
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")


def graph_points(n: int) -> list[Point]:
    """All points of G_n, sorted by abscissa."""
    _check_modulus(n)
    pts = []
    for a in range(1, n):
        try:
            pts.append((a, pow(a, -1, n)))
        except ValueError:
            pass
    return pts


def is_degenerate(n: int) -> bool:
    """True when every unit mod n is an involution, i.e. G_n lies on y = x.

    Stops at the first unit a with a^2 != 1, which is a = 2 or a = 5 for all
    but a handful of small n.
    """
    _check_modulus(n)
    for a in range(2, n):
        if math.gcd(a, n) == 1 and a * a % n != 1:
            return False
    return True


def symmetric_closure(points: Iterable[Point], n: int) -> set[Point]:
    """Orbit of ``points`` under the reflections in y = x and x + y = n."""
    out: set[Point] = set()
    for a, b in points:
        out.update(((a, b), (b, a), (n - b, n - a), (n - a, n - b)))
    return out


def _result(n: int, candidates: Iterable[Point], algorithm: str, start: float) -> HullResult:
    verts = convex_hull(candidates)
    return HullResult(
        n=n,
        vertices=tuple(verts),
        degenerate=len(verts) <= 2,
        algorithm=algorithm,
        elapsed=time.perf_counter() - start,
    )


def brute_force_hull(n: int) -> HullResult:
    _check_modulus(n)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force hull limited to n <= {BRUTE_FORCE_LIMIT}, got {n}")
    start = time.perf_counter()
    return _result(n, graph_points(n), "brute", start)


def search_chain(n: int) -> list[Point]:
    """Hull vertices in the triangle x <= y, x + y <= n, by incremental search.

    Starting from (1, 1), the next candidate is the smallest unit a past the
    current abscissa with a <= (n + a_i - b_i)/2 whose inverse beats the
    current difference b_i - a_i.  Each accepted point pops earlier points
    that no longer make a strict clockwise turn.
    """
    _check_modulus(n)
    chain: list[Point] = [(1, 1)]
    ai = bi = 1
    while True:
        diff = bi - ai
        limit = (n + ai - bi) // 2
        a = ai + 1
        b = 0
        while a <= limit:
            try:
                b = pow(a, -1, n)
            except ValueError:
                a += 1
                continue
            if b - a > diff:
                break
            a += 1
        else:
            break
        while len(chain) >= 2:
            (x0, y0), (x1, y1) = chain[-2], chain[-1]
            # keep only strict clockwise turns
            if (x1 - x0) * (b - y0) - (y1 - y0) * (a - x0) >= 0:
                chain.pop()
            else:
                break
        chain.append((a, b))
        ai, bi = a, b
    return chain


def search_hull(n: int) -> HullResult:
    start = time.perf_counter()
    chain = search_chain(n)
    return _result(n, symmetric_closure(chain, n), "search", start)


def alpha_points(n: int, j: int, half: bool = True) -> list[Point]:
    """Points of G_n on the arc x(n - y) = jn - 1 with 1 <= x <= y <= n-1.

    With ``half`` (the default) only divisors x <= sqrt(jn - 1) are used,
    which keeps the part of the arc on or below the line x + y = n; the rest
    of the arc is the mirror image of points found on the same level.
    """
    _check_modulus(n)
    if j < 1:
        raise ValueError(f"level must be >= 1, got {j}")
    target = j * n - 1
    root = math.isqrt(target)
    pts = []
    for d in nt.divisors(target):
        if half and d > root:
            break
        y = n - target // d
        if 1 <= y <= n - 1 and d <= y:
            pts.append((d, y))
    return pts


def level_bound(n: int) -> int:
    """floor((T(n-1) + 3)/4), clamped to ceil(n/4)."""
    if n < 3:
        raise ValueError(f"level_bound needs n >= 3, got {n}")
    t = nt.t_ratio(n - 1)
    m = (t.numerator + 3 * t.denominator) // (4 * t.denominator)
    return max(1, min(m, -(-n // 4)))


def gamma_intersects_alpha(n: int, m: int) -> bool:
    """Whether level m meets the upper-left boundary of the hull of the level-1 points.

    The two are disjoint iff r + 1/r < 4m - 2 + 4(m-1)/(n-1) for every ratio
    r of consecutive divisors of n - 1; evaluated in integers.
    """
    if m < 2 or n < 3:
        raise ValueError(f"need m >= 2 and n >= 3, got m={m}, n={n}")
    s = n - 1
    rhs = (4 * m - 2) * s + 4 * (m - 1)
    divs = nt.divisors(s)
    for lo, hi in zip(divs, divs[1:]):
        # (lo/hi + hi/lo) * s >= rhs, multiplied through by lo*hi
        if (lo * lo + hi * hi) * s >= rhs * lo * hi:
            return True
    return False


# one level costs about as much as this many search candidates (measured)
LEVEL_WEIGHT = 64


def search_cost(best_sum: int) -> float:
    """Candidates the incremental search would inspect, given a known point.

    Any point (a, b) of G_n with a + (n - b) = ``best_sum`` bounds n - M(n),
    and the search stops near (n - M(n))/2.
    """
    return best_sum / 2


def factor_cost(levels_left: int) -> float:
    return levels_left * LEVEL_WEIGHT


def _inside_level_one_hull(n: int, points: Iterable[Point]) -> list[Point]:
    """Drop points strictly inside the hull of the level-1 points and their mirrors."""
    base = convex_hull(symmetric_closure(alpha_points(n, 1), n))
    return [p for p in points if not strictly_inside(base, p)]


def factor_hull(n: int, fallback: bool = True, prefilter: bool = False) -> HullResult:
    """Hull from the points on levels 1..m_n only.

    With ``fallback`` the walk over levels is abandoned for the incremental
    search as soon as the levels still to factor cost more than the search
    would, judged from the best point found so far (the result is then
    tagged ``search``).  ``prefilter`` discards candidates strictly inside
    the level-1 hull before the final chain; it never changes the result.
    """
    _check_modulus(n)
    if n < 3:
        return search_hull(n)
    start = time.perf_counter()
    levels = level_bound(n)
    candidates: list[Point] = []
    best_sum = n
    for j in range(1, levels + 1):
        pts = alpha_points(n, j)
        candidates.extend(pts)
        if fallback:
            best_sum = min([best_sum] + [a + n - b for a, b in pts])
            if factor_cost(levels - j) > search_cost(best_sum):
                return search_hull(n)
    if prefilter:
        candidates = _inside_level_one_hull(n, candidates)
    return _result(n, symmetric_closure(candidates, n), "factor", start)


def choose_algorithm(n: int) -> str:
    """``factor`` when T(n-1) <= n^(3/4), else ``search``."""
    if n < 3:
        return "search"
    t = nt.t_ratio(n - 1)
    # T^4 <= n^3, exactly
    return "factor" if t.numerator**4 <= n**3 * t.denominator**4 else "search"


def compute_hull(n: int, algorithm: str = "auto") -> HullResult:
    if algorithm == "auto":
        algorithm = choose_algorithm(n)
    if algorithm == "search":
        return search_hull(n)
    if algorithm == "factor":
        return factor_hull(n)
    if algorithm == "brute":
        return brute_force_hull(n)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def triangle_chain(n: int, result: HullResult | None = None) -> TriangleChain:
    """Hull vertices with x <= y and x + y <= n, by increasing abscissa."""
    if n in DEGENERATE_MODULI:
        raise ValueError(f"n={n} is degenerate; G_n lies on the line y = x")
    if result is None:
        result = compute_hull(n)
    pts = sorted((a, b) for a, b in result.vertices if a <= b and a + b <= n)
    return TriangleChain(n=n, points=tuple(pts))


def max_diff(n: int, result: HullResult | None = None) -> int:
    """M(n) = max |a - b| over G_n (0 when G_n lies on y = x)."""
    _check_modulus(n)
    if result is None:
        result = compute_hull(n)
    if result.degenerate:
        return 0
    return result.max_diff


def equidistribution_discrepancy(n: int, grid: int) -> float:
    """Largest gap between cell area and point share over a grid x grid partition.

    Points are scaled to (a/n, b/n); cells are [i/k, (i+1)/k) x [j/k, (j+1)/k).
    """
    _check_modulus(n)
    if grid < 1:
        raise ValueError(f"grid must be >= 1, got {grid}")
    counts = [[0] * grid for _ in range(grid)]
    total = 0
    for a, b in graph_points(n):
        counts[a * grid // n][b * grid // n] += 1
        total += 1
    area = Fraction(1, grid * grid)
    worst = max(abs(area - Fraction(c, total)) for row in counts for c in row)
    return float(worst)
