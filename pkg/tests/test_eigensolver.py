import warnings

import numpy as np
import pytest

from sparse_eigsolve.assembly import assemble, block_split, build_bases, normalize_spec
from sparse_eigsolve.eigensolver import (
    eigen_residuals,
    left_eigen,
    reduced_matrix,
    schur_reduce,
    solve_F,
)
from sparse_eigsolve.errors import MultiplicityWarning, RankDeficient


def test_solve_F_min_norm_and_residual():
    rng = np.random.default_rng(0)
    M22 = rng.standard_normal((4, 7))
    M21 = rng.standard_normal((4, 3))
    sol = solve_F(M21, M22)
    assert sol.rank == 4
    np.testing.assert_allclose(M22 @ sol.F, -M21, atol=1e-12)
    np.testing.assert_allclose(sol.F, -np.linalg.pinv(M22) @ M21, atol=1e-12)
    assert sol.condition >= 1


def test_solve_F_rank_deficient():
    M22 = np.ones((3, 5))
    with pytest.raises(RankDeficient) as info:
        solve_F(np.zeros((3, 2)), M22)
    assert info.value.rank == 1 and info.value.q == 3


def test_solve_F_rejects_bad_shapes():
    with pytest.raises(ValueError):
        solve_F(np.zeros((0, 2)), np.zeros((0, 3)))
    with pytest.raises(ValueError):
        solve_F(np.zeros((2, 2)), np.eye(3))


def test_zero_lower_left_block_gives_M11():
    M11 = np.arange(4.0).reshape(2, 2)
    F = solve_F(np.zeros((3, 2)), np.eye(3, 4)).F
    np.testing.assert_array_equal(reduced_matrix(M11, np.ones((2, 4)), F), M11)


def test_left_eigen_diagonal():
    pairs = left_eigen(np.diag([2.0, 3.0]))
    assert [p.value for p in pairs] == [3, 2]
    for p, j in zip(pairs, (1, 0)):
        w = p.left_vector / p.left_vector[j]
        np.testing.assert_allclose(w, np.eye(2)[j], atol=1e-14)


def test_left_eigen_identity():
    pairs = left_eigen(np.eye(3))
    assert len(pairs) == 3
    assert all(p.value == 1 for p in pairs)


def test_left_eigen_complex_conjugate_pairs():
    R = np.array([[0.0, -1.0], [1.0, 0.0]])
    vals = sorted((p.value for p in left_eigen(R)), key=lambda z: z.imag)
    np.testing.assert_allclose(vals, [-1j, 1j], atol=1e-14)


def test_defective_matrix_warns():
    R = np.array([[1.0, 1.0], [0.0, 1.0]])
    with pytest.warns(MultiplicityWarning):
        pairs = left_eigen(R)
    assert len(pairs) == 1
    np.testing.assert_allclose(abs(pairs[0].left_vector[1]), 1.0)


def test_left_eigen_rejects_non_square():
    with pytest.raises(ValueError):
        left_eigen(np.zeros((2, 3)))
    assert left_eigen(np.zeros((0, 0))) == []


def test_graded_matrix_residuals():
    # strongly graded entries are where balancing hurts; residuals must stay tiny
    rng = np.random.default_rng(3)
    D = np.diag(10.0 ** np.arange(0, 12, 2))
    R = D @ rng.standard_normal((6, 6)) @ np.linalg.inv(D)
    with warnings.catch_warnings():
        warnings.simplefilter("error", MultiplicityWarning)
        pairs = left_eigen(R)
    bound = 1e-8 * np.abs(R).sum(axis=1).max()
    W = np.array([p.left_vector for p in pairs]).T
    vals = np.array([p.value for p in pairs])
    assert np.all(eigen_residuals(R, vals, W) <= bound)


def test_eigenvalues_contain_f0_at_root(example_system, generic_f0):
    spec = normalize_spec(generic_f0, example_system)
    M = assemble(spec, build_bases(spec))
    red = schur_reduce(M)
    assert red.rank22 == 5
    M11, M12, M21, M22 = block_split(M)
    assert np.linalg.norm(M22 @ red.F + M21) <= 1e-8 * max(1, np.linalg.norm(M21))
    vals = [p.value for p in left_eigen(red.R)]
    assert min(abs(v - generic_f0((1, 1))) for v in vals) < 1e-10


def test_determinism(example_system, generic_f0):
    spec = normalize_spec(generic_f0, example_system)
    M = assemble(spec, build_bases(spec))
    a, b = schur_reduce(M), schur_reduce(M)
    np.testing.assert_array_equal(a.F, b.F)
    np.testing.assert_array_equal([p.value for p in left_eigen(a.R)], [p.value for p in left_eigen(b.R)])
