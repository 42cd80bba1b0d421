"""Shared oracles and generators for the test suite.

The oracles here are deliberately independent of the package internals:
polygon areas come from the shoelace formula after an exact angular sort,
membership tests from Caratheodory-style barycentric solves, and the
smooth surface completion from elementary 2-cone subdivision.
"""
from fractions import Fraction

import pytest

from nefmirror.errors import InputError
from nefmirror.intlin import primitivize, solve_linear
from nefmirror.lattice import convex_hull, is_reflexive, lattice_points
from nefmirror.nefpart import build_nef_partition
from nefmirror.toric import make_fan, normal_fan

P2_DELTA = [(2, -1), (-1, 2), (-1, -1)]
P3_DELTA = [(3, -1, -1), (-1, 3, -1), (-1, -1, 3), (-1, -1, -1)]
HEX_NABLA = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)]


def ccw_sort(points):
    """Sort points counterclockwise around their centroid, exactly."""
    n = len(points)
    cx = sum(Fraction(p[0]) for p in points) / n
    cy = sum(Fraction(p[1]) for p in points) / n

    def half(p):
        dx, dy = Fraction(p[0]) - cx, Fraction(p[1]) - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    import functools

    def compare(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return -1 if hp < hq else 1
        px, py = Fraction(p[0]) - cx, Fraction(p[1]) - cy
        qx, qy = Fraction(q[0]) - cx, Fraction(q[1]) - cy
        cross = px * qy - py * qx
        if cross == 0:
            return 0
        return -1 if cross > 0 else 1

    return sorted(points, key=functools.cmp_to_key(compare))


def shoelace_area(points):
    """Exact area of the convex polygon spanned by the points."""
    ring = ccw_sort(points)
    twice = sum(Fraction(p[0]) * Fraction(q[1]) - Fraction(p[1]) * Fraction(q[0])
                for p, q in zip(ring, ring[1:] + ring[:1]))
    return abs(twice) / 2


def in_convex_hull_oracle(point, points):
    """Exact membership via barycentric solves over affinely independent
    subsets (Caratheodory); independent of the hull code."""
    from itertools import combinations
    d = len(point)
    for size in range(1, d + 2):
        for subset in combinations(points, size):
            rows = [[Fraction(p[i]) for p in subset] for i in range(d)]
            rows.append([Fraction(1)] * size)
            sol = solve_linear(rows, list(point) + [1])
            if sol is not None and all(x >= 0 for x in sol):
                if all(sum(r * s for r, s in zip(row, sol)) == b
                       for row, b in zip(rows, list(point) + [1])):
                    return True
    return False


def boundary_lattice_count(polygon):
    """Lattice points on the boundary of a lattice polygon, via gcds of
    edge vectors (independent of the facet machinery)."""
    from math import gcd
    ring = ccw_sort(polygon.vertices)
    total = 0
    for p, q in zip(ring, ring[1:] + ring[:1]):
        dx, dy = q[0] - p[0], q[1] - p[1]
        total += gcd(abs(int(dx)), abs(int(dy)))
    return total


def random_lattice_polygon(rng, spread=3):
    """A full-dimensional lattice polygon from random small points."""
    while True:
        pts = [(rng.randint(-spread, spread), rng.randint(-spread, spread))
               for _ in range(rng.randint(3, 8))]
        try:
            poly = convex_hull(pts)
        except InputError:
            continue
        if poly.dim == 2:
            return poly


def random_reflexive_polygon(rng):
    while True:
        poly = random_lattice_polygon(rng, spread=2)
        if is_reflexive(poly):
            return poly


def random_nef_partition(polytope, rng, max_parts=3):
    """A random valid nef-partition (falls back to the trivial one)."""
    fan = normal_fan(polytope)
    k = len(fan.rays)
    for _ in range(40):
        r = rng.randint(1, min(max_parts, k))
        assignment = [rng.randrange(r) for _ in range(k)]
        parts = [[i for i in range(k) if assignment[i] == s] for s in range(r)]
        if any(not part for part in parts):
            continue
        try:
            return build_nef_partition(polytope, parts)
        except InputError:
            continue
    return build_nef_partition(polytope, [list(range(k))])


def smooth_surface_fan(polygon):
    """A smooth complete fan refining the normal fan of a lattice polygon:
    non-unimodular 2-cones are split recursively at an interior lattice
    direction that strictly decreases the determinant."""
    fan = normal_fan(polygon)

    def split(u, v):
        d = abs(u[0] * v[1] - u[1] * v[0])
        if d == 1:
            return [(u, v)]
        tri = convex_hull([(0, 0), u, v])
        best = None
        for w in lattice_points(tri):
            if w == (0, 0) or w == u or w == v:
                continue
            w = primitivize(w)
            d1 = abs(u[0] * w[1] - u[1] * w[0])
            d2 = abs(w[0] * v[1] - w[1] * v[0])
            if d1 == 0 or d2 == 0:
                continue
            key = (max(d1, d2), d1 + d2, w)
            if best is None or key < best:
                best = key
        w = best[2]
        return split(u, w) + split(w, v)

    pairs = []
    for cone in fan.max_cones:
        u, v = fan.rays[cone[0]], fan.rays[cone[1]]
        pairs.extend(split(u, v))
    rays = sorted({r for pair in pairs for r in pair})
    index = {r: i for i, r in enumerate(rays)}
    return make_fan(rays, [tuple(sorted((index[u], index[v]))) for u, v in pairs])


@pytest.fixture
def p2_delta():
    return convex_hull(P2_DELTA)


@pytest.fixture
def p2_fan(p2_delta):
    return normal_fan(p2_delta)
