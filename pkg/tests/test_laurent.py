from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparse_eigsolve.errors import DimensionMismatch
from sparse_eigsolve.lattice import convex_hull, minkowski_sum
from sparse_eigsolve.laurent import (
    INTEGER_BOX,
    UNIFORM,
    UNIT_COMPLEX,
    LaurentPoly,
    as_fraction_poly,
    mul,
    newton_polytope,
    random_generic,
    shift_to_origin,
    simplex_support,
    unit_simplex_support,
)


def test_newton_polytope_examples(example_system):
    f1, _ = example_system
    assert newton_polytope(f1) == convex_hull([(0, 0), (1, 1)])
    assert newton_polytope(LaurentPoly.constant(2, 5)).vertices == ((0, 0),)
    g = LaurentPoly(2, {(-1, 0): 1, (0, 1): 1})
    assert newton_polytope(g).vertices == ((-1, 0), (0, 1))
    with pytest.raises(ValueError):
        newton_polytope(LaurentPoly(2))


def test_evaluate(example_system):
    f1, f2 = example_system
    assert f1((1, 1)) == 0 and f2((1, 1)) == 0
    assert LaurentPoly.constant(2, 3.5)((7, -2)) == 3.5
    g = LaurentPoly(2, {(-1, 0): 2, (0, 2): 1})
    assert g((2, 3)) == pytest.approx(1 + 9)
    X = np.array([[1, 1], [2, 3]], dtype=complex)
    np.testing.assert_allclose(g.evaluate_many(X), [g(x) for x in X])
    with pytest.raises(DimensionMismatch):
        g((1, 2, 3))


def test_gradient_matches_finite_differences():
    f = LaurentPoly(2, {(-1, 2): 1.5, (3, 0): -2.0, (0, 0): 1.0})
    x = np.array([0.7, -1.3])
    h = 1e-6
    fd = [(f(x + h * e) - f(x - h * e)) / (2 * h) for e in np.eye(2)]
    np.testing.assert_allclose(f.gradient(x), fd, rtol=1e-7)


def test_multiplication_examples():
    x2 = LaurentPoly.variable(2, 1)
    one = LaurentPoly.constant(2)
    f = one - x2
    assert mul(f, one) == f
    assert mul(one - x2, one + x2) == one - x2 * x2
    assert f * 1 == f
    with pytest.raises(DimensionMismatch):
        mul(f, LaurentPoly.constant(3))


def test_exact_cancellation_removes_terms():
    x1 = LaurentPoly.variable(2, 0)
    assert (x1 - x1).is_zero
    assert len(mul(x1 + 1, x1 - 1)) == 2


def test_shift_to_origin():
    f = LaurentPoly(2, {(1, 1): 1, (1, 0): -1})
    assert shift_to_origin(f) == LaurentPoly(2, {(0, 1): 1, (0, 0): -1})
    g = LaurentPoly(2, {(0, 0): 1, (1, 1): -1})
    assert shift_to_origin(g) is g
    h = LaurentPoly(2, {(-1, 0): 1, (0, 1): 1})
    assert shift_to_origin(h) == LaurentPoly(2, {(0, 0): 1, (1, 1): 1})


def test_random_generic_is_seeded():
    supp = simplex_support(2, 3)
    for style in (INTEGER_BOX, UNIFORM, UNIT_COMPLEX):
        a = random_generic(supp, 11, style)
        assert a == random_generic(supp, 11, style)
        assert len(a) == len(supp)
    box = random_generic(supp, 5, INTEGER_BOX)
    assert all(c != 0 and -10 <= c <= 10 and float(c).is_integer() for c in box.coefficients.real)
    circ = random_generic(supp, 5, UNIT_COMPLEX)
    np.testing.assert_allclose(np.abs(circ.coefficients), 1.0)
    assert random_generic(supp, 5, UNIFORM) != random_generic(supp, 6, UNIFORM)
    with pytest.raises(ValueError):
        random_generic(supp, 0, "gaussian")
    with pytest.raises(ValueError):
        random_generic([(0, 0), (0, 0)], 0)


def test_supports():
    assert unit_simplex_support(2) == [(0, 0), (1, 0), (0, 1)]
    assert len(simplex_support(3, 2)) == 10


def test_json_round_trip():
    f = LaurentPoly(2, {(-1, 2): 1.5 - 2j, (0, 0): 3})
    assert LaurentPoly.from_json(f.to_json()) == f
    assert LaurentPoly.from_json([{"exponents": [1, 0], "coeff": 2}]) == LaurentPoly(2, {(1, 0): 2})
    for bad in ({"a": 1}, [{"exponents": [1]}], [{"exponents": [1.5], "coeff": 1}]):
        with pytest.raises(ValueError):
            LaurentPoly.from_json(bad)


rational_terms = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)),
    st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(lambda v: v != 0),
    min_size=1,
    max_size=6,
)


@settings(max_examples=100, deadline=None)
@given(rational_terms, rational_terms)
def test_newton_polytope_of_product_is_minkowski_sum(a, b):
    f, g = LaurentPoly(2, a), LaurentPoly(2, b)
    fg = mul(f, g)
    assert all(isinstance(c, Fraction) for _, c in fg.items())
    assert newton_polytope(fg) == minkowski_sum(newton_polytope(f), newton_polytope(g))


def test_as_fraction_poly():
    f = as_fraction_poly(LaurentPoly(1, {(1,): 0.5}))
    assert f.coefficient((1,)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        as_fraction_poly(LaurentPoly(1, {(1,): 1j}))
