"""Monomial bases and the matrix of ``(g0, ..., gk) -> f0*g0 + sum fi*gi``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .lattice import (
    MonomialBasis,
    Polytope,
    convex_hull,
    dilate,
    is_normal,
    lattice_point_array,
    minkowski_sum,
)
from .laurent import LaurentPoly, newton_polytope, shift_to_origin

DEFAULT_BUDGET = 20000
THREADS_ENV = "SPARSE_EIGSOLVE_THREADS"


@dataclass(frozen=True)
class SystemSpec:
    """Equations ``f1..fk``, the auxiliary ``f0`` and declared polytopes ``A0..Ak``.

    ``ambient``, when set, replaces the Minkowski sum ``A0 + ... + Ak`` as the
    row polytope; multiplier sets then become the largest lattice sets ``B``
    with ``Ai + B`` inside it.
    """

    dim: int
    equations: tuple
    aux: LaurentPoly
    declared: tuple
    scale_factors: tuple = ()
    shifts: tuple = ()
    ambient: Polytope | None = None

    def __post_init__(self):
        if not self.equations:
            raise ValueError("need at least one equation")
        if len(self.declared) != len(self.equations) + 1:
            raise ValueError("need one declared polytope per polynomial, f0 first")
        origin = (0,) * self.dim
        for i, (f, A) in enumerate(zip((self.aux,) + tuple(self.equations), self.declared)):
            if f.dim != self.dim or A.dim != self.dim:
                raise DimensionMismatch(f"polynomial {i} has the wrong number of variables")
            if f.is_zero:
                raise ValueError(f"polynomial {i} is zero")
            if not A.contains(origin):
                raise ValueError(f"declared polytope A{i} does not contain the origin")
            if not all(A.contains(e) for e in f.support):
                raise ValueError(f"support of polynomial {i} is not inside its declared polytope")
        if self.aux.is_constant:
            raise ValueError("f0 must be non-constant")
        if self.ambient is not None and not self.ambient.contains(origin):
            raise ValueError("ambient polytope must contain the origin")

    @property
    def k(self) -> int:
        return len(self.equations)

    @property
    def polynomials(self) -> tuple:
        """``(f0, f1, ..., fk)``."""
        return (self.aux,) + tuple(self.equations)


def normalize_spec(f0: LaurentPoly, equations: Sequence[LaurentPoly], kmax: int | None = None) -> SystemSpec:
    """Shift equations to the origin and choose normal declared polytopes.

    Each ``fi`` (i >= 1) is divided by its lexicographically smallest monomial.
    ``f0`` is left untouched so eigenvalues stay equal to ``f0`` at the
    solutions; its declared polytope is the hull of its support and the
    origin. A declared polytope failing the bounded normality test is
    replaced by its ``max(n - 1, 1)`` dilation.
    """
    equations = list(equations)
    if not equations:
        raise ValueError("need at least one equation")
    dim = f0.dim
    for f in equations:
        if f.dim != dim:
            raise DimensionMismatch("all polynomials must have the same number of variables")
        if f.is_zero:
            raise ValueError("zero equation")
    if f0.is_zero or f0.is_constant:
        raise ValueError("f0 must be non-constant")
    scale = max(dim - 1, 1)
    origin = (0,) * dim

    shifted, shifts = [], []
    for f in equations:
        g = shift_to_origin(f)
        shifts.append(tuple(a - b for a, b in zip(g.support[0], f.support[0])) if g is not f else origin)
        shifted.append(g)

    polys = [convex_hull(list(f0.support) + [origin])] + [newton_polytope(g) for g in shifted]
    declared, factors = [], []
    for P in polys:
        if P.affine_dim <= 1 or is_normal(P, kmax):
            declared.append(P)
            factors.append(1)
        else:
            declared.append(dilate(P, scale))
            factors.append(scale)
    return SystemSpec(dim, tuple(shifted), f0, tuple(declared), tuple(factors), tuple(shifts))


@dataclass(frozen=True)
class BasisPair:
    """Row basis ``E`` (``B0`` as prefix) and the multiplier bases ``B0..Bk``."""

    E: MonomialBasis
    B0: MonomialBasis
    bases: tuple

    @property
    def p(self) -> int:
        return len(self.B0)

    @property
    def q(self) -> int:
        return len(self.E) - len(self.B0)

    @property
    def sizes(self) -> tuple:
        """``(p1, ..., pk)``."""
        return tuple(len(B) for B in self.bases)

    def multiplier_bases(self) -> tuple:
        """``(B0, B1, ..., Bk)``."""
        return (self.B0,) + tuple(self.bases)


def _lex_rows(a: np.ndarray) -> list:
    return [tuple(int(c) for c in row) for row in a]


def _fits(points: np.ndarray, A: Polytope, container: Polytope) -> np.ndarray:
    """Mask of ``m`` in ``points`` with ``m + A`` inside ``container``."""
    H = np.array([a for a, _ in container.halfspaces], dtype=np.int64).reshape(-1, container.dim)
    b = np.array([b for _, b in container.halfspaces], dtype=np.int64)
    ok = np.ones(points.shape[0], dtype=bool)
    base = points @ H.T
    for v in A.vertices:
        ok &= np.all(base + (H @ np.array(v, dtype=np.int64))[None, :] <= b[None, :], axis=1)
    return ok


def build_bases(spec: SystemSpec, budget: int = DEFAULT_BUDGET) -> BasisPair:
    """Lattice-point bases of ``E = A0+...+Ak`` and ``Bi = E - Ai`` (Minkowski).

    ``B0`` starts with the origin and is otherwise lexicographic; ``E`` lists
    the ``B0`` points first and the remaining points lexicographically.
    """
    if spec.k < 1:
        raise ValueError("need at least one equation")
    A = list(spec.declared)
    if spec.ambient is None:
        prefix = [None] * (len(A) + 1)
        suffix = [None] * (len(A) + 1)
        for i in range(len(A)):
            prefix[i + 1] = A[i] if prefix[i] is None else minkowski_sum(prefix[i], A[i])
        for i in range(len(A) - 1, -1, -1):
            suffix[i] = A[i] if suffix[i + 1] is None else minkowski_sum(A[i], suffix[i + 1])
        E_poly = prefix[len(A)]
        E_pts = lattice_point_array(E_poly, budget)
        B_pts = []
        for i in range(len(A)):
            parts = [P for P in (prefix[i], suffix[i + 1]) if P is not None]
            Bi = parts[0] if len(parts) == 1 else minkowski_sum(parts[0], parts[1])
            B_pts.append(lattice_point_array(Bi, budget))
    else:
        E_pts = lattice_point_array(spec.ambient, budget)
        B_pts = [E_pts[_fits(E_pts, Ai, spec.ambient)] for Ai in A]

    B0 = MonomialBasis.from_points(_lex_rows(B_pts[0]), unit_first=True)
    in_b0 = set(B0.points)
    rest = [p for p in _lex_rows(E_pts) if p not in in_b0]
    if len(rest) + len(in_b0) != E_pts.shape[0]:
        raise AssertionError("B0 is not contained in E")
    E = MonomialBasis(B0.points + tuple(rest), unit_first=True)
    others = tuple(MonomialBasis(tuple(_lex_rows(b))) for b in B_pts[1:])
    return BasisPair(E, B0, others)


@dataclass
class ResultantMatrix:
    """Dense matrix of the map, rows indexed by ``E`` and columns by (i, m).

    The first ``p`` columns are ``f0 * B0``; ``column_offsets[i]`` is the first
    column of block ``i``.
    """

    data: np.ndarray
    p: int
    q: int
    column_offsets: tuple
    bases: BasisPair = field(repr=False)

    @property
    def shape(self):
        return self.data.shape

    def provenance(self, col: int) -> tuple:
        """``(equation index, multiplier monomial)`` of a column."""
        i = int(np.searchsorted(self.column_offsets, col, side="right")) - 1
        m = self.bases.multiplier_bases()[i].points[col - self.column_offsets[i]]
        return i, m

    def column_of(self, i: int, m) -> int:
        return self.column_offsets[i] + self.bases.multiplier_bases()[i].index[tuple(m)]

    @cached_property
    def one_norm(self) -> float:
        """Largest absolute column sum."""
        return float(np.abs(self.data).sum(axis=0).max())

    def write_matrix_market(self, path) -> None:
        """Dump in Matrix Market coordinate format (complex general)."""
        from scipy.io import mmwrite
        from scipy.sparse import coo_matrix

        mmwrite(str(path), coo_matrix(self.data.astype(complex)), field="complex")


def _encoder(E: np.ndarray):
    lo = E.min(axis=0)
    hi = E.max(axis=0)
    span = hi - lo + 1
    strides = np.ones(E.shape[1], dtype=np.int64)
    for j in range(E.shape[1] - 2, -1, -1):
        strides[j] = strides[j + 1] * span[j + 1]

    def encode(pts):
        return (pts - lo) @ strides

    return lo, hi, encode


def _thread_count(threads):
    if threads is not None:
        return max(int(threads), 1)
    try:
        return max(int(os.environ.get(THREADS_ENV, "1")), 1)
    except ValueError:
        return 1


def assemble(spec: SystemSpec, bases: BasisPair, threads: int | None = None) -> ResultantMatrix:
    """Place the coefficient of ``x**v`` in ``fi`` at row ``v + m`` of column ``(i, m)``."""
    polys = spec.polynomials
    blocks = bases.multiplier_bases()
    E = bases.E.array()
    lo, hi, encode = _encoder(E)
    keys = encode(E)
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    real = all(f.is_real for f in polys)
    dtype = float if real else complex

    offsets = [0]
    for B in blocks:
        offsets.append(offsets[-1] + len(B))
    data = np.zeros((len(bases.E), offsets[-1]), dtype=dtype)

    def fill(i):
        f, B = polys[i], blocks[i]
        if len(B) == 0:
            return
        prods = B.array()[:, None, :] + f.exponents[None, :, :]
        flat = prods.reshape(-1, spec.dim)
        if np.any(flat < lo) or np.any(flat > hi):
            raise AssertionError(f"product monomial of polynomial {i} falls outside E")
        k = encode(flat)
        pos = np.searchsorted(sorted_keys, k)
        pos[pos >= len(sorted_keys)] = 0
        if not np.array_equal(sorted_keys[pos], k):
            raise AssertionError(f"product monomial of polynomial {i} falls outside E")
        rows = order[pos].reshape(len(B), -1)
        cols = offsets[i] + np.arange(len(B))
        coeffs = f.coefficients.real if real else f.coefficients
        data[rows, cols[:, None]] = coeffs[None, :]

    n_threads = _thread_count(threads)
    if n_threads > 1:
        with ThreadPoolExecutor(n_threads) as pool:
            list(pool.map(fill, range(len(polys))))
    else:
        for i in range(len(polys)):
            fill(i)
    return ResultantMatrix(data, bases.p, bases.q, tuple(offsets[:-1]), bases)


def block_split(M: ResultantMatrix):
    """``(M11, M12, M21, M22)`` as views of ``M.data``."""
    p = M.p
    d = M.data
    return d[:p, :p], d[:p, p:], d[p:, :p], d[p:, p:]


def numerical_rank(A: np.ndarray, tol: float | None = None) -> int:
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if tol is None:
        tol = max(A.shape) * np.finfo(float).eps * s[0]
    return int((s > tol).sum())
