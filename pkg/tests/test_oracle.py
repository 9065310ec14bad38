import itertools

import numpy as np
import pytest

from sparse_eigsolve.lattice import convex_hull, lattice_points, standard_simplex
from sparse_eigsolve.laurent import LaurentPoly, random_generic, simplex_support
from sparse_eigsolve.oracle import (
    UnivariatePoly,
    audit_residuals,
    bivariate_solve,
    brute_lattice_points,
    sylvester_resultant,
)


def test_univariate_roots():
    p = UnivariatePoly((2, -3, 1))  # (t - 1)(t - 2)
    np.testing.assert_allclose(sorted(p.roots().real), [1, 2])
    assert p.degree == 2 and p(2) == 0
    assert UnivariatePoly((0, 0)).is_zero
    with pytest.raises(ValueError):
        UnivariatePoly(()).roots()


def test_example_resultant(example_system):
    res = sylvester_resultant(*example_system)
    assert res.degree == 1
    np.testing.assert_allclose(res.roots(), [1.0])


def test_identical_polynomials_give_zero_resultant(example_system):
    f, _ = example_system
    assert sylvester_resultant(f, f).is_zero
    with pytest.raises(ValueError):
        bivariate_solve(f, f)


def test_generic_quadratics_give_degree_four():
    f, g = (random_generic(simplex_support(2, 2), s) for s in (1, 2))
    assert sylvester_resultant(f, g).degree == 4
    roots = bivariate_solve(f, g)
    assert len(roots) == 4
    assert audit_residuals([f, g], roots).max() < 1e-8 * 100


def test_example_and_univariate_systems(example_system):
    np.testing.assert_allclose(bivariate_solve(*example_system), [(1, 1)])
    x1, x2 = LaurentPoly.variable(2, 0), LaurentPoly.variable(2, 1)
    roots = bivariate_solve(x1 * x1 - 1, x2 - 1)
    assert sorted((round(r[0].real), round(r[1].real)) for r in roots) == [(-1, 1), (1, 1)]


def test_resultant_requires_eliminated_variable():
    x1 = LaurentPoly.variable(2, 0)
    with pytest.raises(ValueError):
        sylvester_resultant(x1 - 1, x1 + 2)


def test_brute_lattice_points_examples():
    assert brute_lattice_points(standard_simplex(2)) == [(0, 0), (0, 1), (1, 0)]
    seg = convex_hull([(0, 0), (3, 3)])
    assert brute_lattice_points(seg) == [(i, i) for i in range(4)]
    assert brute_lattice_points(convex_hull([(0, 0), (2, 1)])) == [(0, 0), (2, 1)]


def test_brute_matches_lattice_points_on_fixed_hulls():
    rng = np.random.default_rng(0)
    for dim in (1, 2, 3):
        for _ in range(5):
            pts = [tuple(int(v) for v in rng.integers(-3, 4, size=dim)) for _ in range(rng.integers(1, 6))]
            P = convex_hull(pts)
            assert brute_lattice_points(P) == lattice_points(P)


def test_audit_residuals_shape(example_system):
    out = audit_residuals(example_system, [(1, 1), (2, 1)])
    assert out.shape == (2, 2)
    assert out[0].max() == 0 and out[1, 0] == 1


def test_feasibility_over_a_cube():
    cube = convex_hull(list(itertools.product((0, 2), repeat=3)))
    assert len(brute_lattice_points(cube)) == 27
