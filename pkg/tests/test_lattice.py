import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparse_eigsolve.errors import BasisBudgetExceeded, DimensionMismatch
from sparse_eigsolve.lattice import (
    MonomialBasis,
    convex_hull,
    count_lattice_points,
    dilate,
    is_normal,
    lattice_point_array,
    lattice_points,
    minkowski_sum,
    minkowski_sum_all,
    mixed_volume,
    point_polytope,
    standard_simplex,
    sumset,
    volume,
)

points2 = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=8)
points3 = st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=1, max_size=7)


def test_segment_hull():
    P = convex_hull([(0, 0), (1, 1)])
    assert P.vertices == ((0, 0), (1, 1))
    assert P.affine_dim == 1


def test_singleton_hull():
    P = convex_hull([(0, 0)])
    assert P.vertices == ((0, 0),)
    assert lattice_points(P) == [(0, 0)]


def test_duplicates_and_interior_points_dropped():
    P = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1), (1, 0), (0, 0)])
    assert P.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))
    Q = convex_hull([(0, 0), (2, 0), (0, 2), (1, 1), (1, 0)])
    assert Q.vertices == ((0, 0), (0, 2), (2, 0))


def test_hull_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        convex_hull([(0, 0), (1, 0, 0)])
    with pytest.raises(ValueError):
        convex_hull([])


def test_minkowski_examples():
    S = minkowski_sum(convex_hull([(0, 0), (1, 1)]), convex_hull([(0, 0), (0, 1)]))
    # brute force: hull of all pairwise vertex sums
    brute = convex_hull([(a + c, b + d) for (a, b), (c, d) in itertools.product([(0, 0), (1, 1)], [(0, 0), (0, 1)])])
    assert S == brute
    assert set(S.vertices) == {(0, 0), (0, 1), (1, 1), (1, 2)}
    P = standard_simplex(2)
    assert minkowski_sum(P, point_polytope((0, 0))) == P
    assert minkowski_sum(P, P) == dilate(P, 2)
    assert dilate(P, 2).vertices == ((0, 0), (0, 2), (2, 0))


def test_minkowski_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        minkowski_sum(standard_simplex(2), standard_simplex(3))


def test_dilate_rules():
    P = convex_hull([(0, 0), (2, 1), (1, 3)])
    assert dilate(P, 1) == P
    assert dilate(dilate(P, 2), 3) == dilate(P, 6)
    with pytest.raises(ValueError):
        dilate(P, 0)


def test_parallelogram_lattice_points():
    P = convex_hull([(0, 0), (0, 1), (1, 1), (1, 2)])
    assert lattice_points(P) == [(0, 0), (0, 1), (1, 1), (1, 2)]


def test_simplex_counts_are_binomials():
    from math import comb

    for n in (1, 2, 3):
        for d in range(5):
            P = standard_simplex(n, max(d, 1)) if d else point_polytope((0,) * n)
            assert count_lattice_points(P) == comb(d + n, n)


def test_lattice_points_lex_order_and_negative_coordinates():
    P = convex_hull([(-2, -1), (1, -1), (0, 2)])
    pts = lattice_points(P)
    assert pts == sorted(pts)
    assert all(P.contains(p) for p in pts)
    assert (-2, -1) in pts and (0, 2) in pts


def test_budget_guard():
    with pytest.raises(BasisBudgetExceeded):
        lattice_point_array(standard_simplex(3, 20), limit=100)


def test_volumes():
    assert volume(standard_simplex(2)) == Fraction(1, 2)
    assert volume(standard_simplex(2, 2)) == 2
    assert volume(standard_simplex(3)) == Fraction(1, 6)
    assert volume(convex_hull([(0, 0), (1, 1)])) == 0
    cube = convex_hull(list(itertools.product((0, 1), repeat=3)))
    assert volume(cube) == 1


def test_mixed_volume_examples():
    A1 = convex_hull([(0, 0), (1, 1)])
    A2 = convex_hull([(0, 0), (0, 1)])
    assert mixed_volume([A1, A2]) == 1
    D = standard_simplex(2)
    assert mixed_volume([D, D]) == 1
    assert mixed_volume([dilate(D, 2), dilate(D, 3)]) == 6
    assert mixed_volume([standard_simplex(3, d) for d in (1, 2, 3)]) == 6
    with pytest.raises(ValueError):
        mixed_volume([D])


def test_normality():
    assert is_normal(standard_simplex(3))
    assert is_normal(convex_hull([(0, 0), (1, 1)]))
    # Reeve-type simplex: no interior lattice points but its 2-fold dilation has some
    reeve = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])
    assert not is_normal(reeve, kmax=2)


def test_monomial_basis():
    B = MonomialBasis.from_points([(1, 0), (0, 0), (0, 1)], unit_first=True)
    assert B.points[0] == (0, 0)
    assert B.index[(0, 1)] == 2
    assert B.array().shape == (3, 2)
    with pytest.raises(ValueError):
        MonomialBasis(((0, 0), (0, 0)))
    with pytest.raises(ValueError):
        MonomialBasis(((1, 0),), unit_first=True)


@settings(max_examples=60, deadline=None)
@given(points2)
def test_hull_idempotent_2d(pts):
    P = convex_hull(pts)
    assert convex_hull(P.vertices) == P
    assert all(P.contains(p) for p in pts)


@settings(max_examples=40, deadline=None)
@given(points3)
def test_hull_idempotent_3d(pts):
    P = convex_hull(pts)
    assert convex_hull(P.vertices) == P
    assert all(P.contains(p) for p in pts)


@settings(max_examples=40, deadline=None)
@given(points2, points2, points2)
def test_minkowski_commutative_associative(a, b, c):
    P, Q, R = convex_hull(a), convex_hull(b), convex_hull(c)
    assert minkowski_sum(P, Q) == minkowski_sum(Q, P)
    assert minkowski_sum(minkowski_sum(P, Q), R) == minkowski_sum(P, minkowski_sum(Q, R))
    assert minkowski_sum_all([P, Q, R]) == minkowski_sum(P, minkowski_sum(Q, R))


@settings(max_examples=40, deadline=None)
@given(points2, st.integers(2, 3))
def test_sumset_inside_dilation(pts, k):
    P = convex_hull(pts)
    S = {tuple(r) for r in sumset(lattice_point_array(P), k)}
    D = set(lattice_points(dilate(P, k)))
    assert S <= D


@settings(max_examples=30, deadline=None)
@given(points2, points2)
def test_mixed_volume_symmetric_and_bounded(a, b):
    P, Q = convex_hull(a), convex_hull(b)
    mv = mixed_volume([P, Q])
    assert mv == mixed_volume([Q, P])
    assert mv >= 0
    assert mixed_volume([P, P]) == 2 * volume(P)
