from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from gaussrr.laurent import parse
from gaussrr.polytope import (
    convex_hull,
    lattice_point_counts,
    minkowski_sum,
    mixed_volume,
    newton_polytope,
    normalized_volume,
)

SQUARE = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
SIMPLEX = convex_hull([(0, 0), (1, 0), (0, 1)])
QUAD = convex_hull([(0, 0), (1, 0), (2, 2), (0, 1)])


def scipy_normalized_volume(points):
    pts = np.array(sorted(set(map(tuple, points))), dtype=float)
    d = pts.shape[1]
    if len(pts) <= d or np.linalg.matrix_rank(pts[1:] - pts[0]) < d:
        return 0
    return round(ConvexHull(pts).volume * math.factorial(d))


def brute_force_counts(points):
    """Interior and boundary lattice points by testing every box point against the hull inequalities."""
    pts = np.array(points, dtype=float)
    eqs = ConvexHull(pts).equations
    lo, hi = pts.min(axis=0).astype(int), pts.max(axis=0).astype(int)
    interior = boundary = 0
    for p in itertools.product(range(lo[0], hi[0] + 1), range(lo[1], hi[1] + 1)):
        s = eqs[:, :2] @ np.array(p) + eqs[:, 2]
        if (s > 1e-9).any():
            continue
        if (np.abs(s) < 1e-9).any():
            boundary += 1
        else:
            interior += 1
    return interior, boundary


def test_convex_hull_examples():
    assert set(convex_hull([(0, 0), (1, 0), (0, 1), (1, 1), (0, 0)]).vertices) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    seg = convex_hull([(0,), (5,), (2,)])
    assert seg.vertices == ((0,), (5,)) and seg.affine_dim == 1
    diag = convex_hull([(0, 0), (2, 2), (1, 1)])
    assert diag.vertices == ((0, 0), (2, 2)) and diag.affine_dim == 1


def test_convex_hull_errors():
    with pytest.raises(ValueError):
        convex_hull([])
    with pytest.raises(ValueError):
        convex_hull([(0,) * 5, (1, 0, 0, 0, 0)])


def test_normalized_volume_examples():
    assert normalized_volume(SQUARE) == 2
    assert normalized_volume(SIMPLEX) == 1
    assert normalized_volume(QUAD) == 4
    assert normalized_volume(convex_hull([(0, 0), (2, 2)])) == 0
    assert normalized_volume(convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])) == 3
    cube = convex_hull(list(itertools.product((0, 2), repeat=3)))
    assert normalized_volume(cube) == 48
    assert len(cube.faces()) == 27


def test_lattice_point_counts_examples():
    assert lattice_point_counts(SQUARE) == (0, 4)
    assert lattice_point_counts(SIMPLEX) == (0, 3)
    assert lattice_point_counts(QUAD) == (1, 4)
    with pytest.raises(ValueError):
        lattice_point_counts(convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]))


def test_minkowski_sum_examples():
    assert minkowski_sum(convex_hull([(0, 0), (1, 0)]), convex_hull([(0, 0), (0, 1)])) == SQUARE
    assert minkowski_sum(QUAD, convex_hull([(0, 0)])) == QUAD
    assert minkowski_sum(SQUARE, SQUARE) == convex_hull([(0, 0), (2, 0), (0, 2), (2, 2)])
    with pytest.raises(ValueError):
        minkowski_sum(SQUARE, convex_hull([(0,), (1,)]))


def test_mixed_volume_examples():
    assert mixed_volume(SIMPLEX, SIMPLEX) == 1
    assert mixed_volume(SQUARE, SQUARE) == 2
    assert mixed_volume(convex_hull([(0, 0), (1, 0)]), convex_hull([(0, 0), (0, 1)])) == 1
    with pytest.raises(ValueError):
        mixed_volume(SQUARE, convex_hull([(0,), (1,)]))


def test_newton_polytope():
    P = newton_polytope(parse("1 + x*y^-2 + x^2", 2))
    assert set(P.vertices) == {(0, 0), (1, -2), (2, 0)}


lattice_2d = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=9)
lattice_3d = st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=4, max_size=9)


def full_dim(points):
    arr = np.array(points)
    return np.linalg.matrix_rank(arr[1:] - arr[0]) == arr.shape[1]


@given(lattice_2d.filter(full_dim))
def test_volume_matches_scipy_in_the_plane(points):
    assert normalized_volume(convex_hull(points)) == scipy_normalized_volume(points)


@settings(max_examples=40)
@given(lattice_3d.filter(full_dim))
def test_volume_matches_scipy_in_space(points):
    assert normalized_volume(convex_hull(points)) == scipy_normalized_volume(points)


@given(lattice_2d.filter(full_dim))
def test_lattice_counts_match_brute_force_and_pick(points):
    P = convex_hull(points)
    I, B = lattice_point_counts(P)
    assert (I, B) == brute_force_counts(points)
    assert normalized_volume(P) == 2 * I + B - 2


@settings(max_examples=40)
@given(lattice_2d.filter(full_dim), lattice_2d.filter(full_dim))
def test_mixed_volume_symmetric_and_diagonal(a, b):
    P, Q = convex_hull(a), convex_hull(b)
    assert mixed_volume(P, Q) == mixed_volume(Q, P)
    assert mixed_volume(P, P) == normalized_volume(P)
    # monotone: MV(P, Q) <= MV(P + S, Q) for the unit simplex S
    assert mixed_volume(P, Q) <= mixed_volume(minkowski_sum(P, SIMPLEX), Q)


@given(lattice_2d)
def test_vertices_are_extreme_and_all_points_contained(points):
    P = convex_hull(points)
    for p in points:
        assert P.contains(p)
    for v in P.vertices:
        rest = [q for q in P.vertices if q != v]
        if rest:
            assert not convex_hull(rest).contains(v)
