"""Exact integer geometry of Newton polytopes.

All computations use Python integers and :class:`fractions.Fraction`; floating
point never enters hull, membership, normality or volume decisions.

Hulls are computed with an incremental beneath-beyond pass over the points in
lexicographic order, carried out inside the affine hull of the input (projected
onto pivot coordinates, which is injective on the affine hull). The same pass
yields a placing triangulation that gives exact volumes.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BasisBudgetExceeded, DimensionMismatch

LatticePoint = tuple  # tuple[int, ...]


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def _det(rows):
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rref(rows, ncols):
    """Reduced row echelon form over the rationals.

    Returns ``(basis_rows, pivots)``; ``basis_rows`` spans the row space.
    """
    basis = []
    pivots = []
    for row in rows:
        v = [Fraction(x) for x in row]
        for b, pc in zip(basis, pivots):
            if v[pc]:
                c = v[pc]
                v = [vi - c * bi for vi, bi in zip(v, b)]
        lead = next((j for j in range(ncols) if v[j]), None)
        if lead is None:
            continue
        c = v[lead]
        v = [vi / c for vi in v]
        for idx, b in enumerate(basis):
            if b[lead]:
                cb = b[lead]
                basis[idx] = [bi - cb * vi for bi, vi in zip(b, v)]
        basis.append(v)
        pivots.append(lead)
        if len(basis) == ncols:
            break
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [basis[i] for i in order], [pivots[i] for i in order]


def _rank(rows, ncols):
    return len(_rref(rows, ncols)[1])


def _primitive(vec):
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g > 1:
        return tuple(x // g for x in vec)
    return tuple(vec)


def _integer_nullspace(basis, pivots, ncols):
    """Integer basis of the orthogonal complement of an RREF row space."""
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for row, pc in zip(basis, pivots):
            vec[pc] = -row[fcol]
        den = 1
        for x in vec:
            den = den * x.denominator // math.gcd(den, x.denominator)
        out.append(_primitive([int(x * den) for x in vec]))
    return out


def _hyperplane(points):
    """Integer hyperplane ``a.x = b`` through ``r`` affinely independent points of Z^r."""
    p0 = points[0]
    r = len(p0)
    diffs = [[pi - qi for pi, qi in zip(p, p0)] for p in points[1:]]
    a = []
    for k in range(r):
        minor = [row[:k] + row[k + 1:] for row in diffs]
        a.append((-1) ** k * _det(minor))
    a = _primitive(a)
    b = sum(ai * xi for ai, xi in zip(a, p0))
    return a, b


def _dot(a, x):
    return sum(ai * xi for ai, xi in zip(a, x))


# ---------------------------------------------------------------------------
# beneath-beyond / placing triangulation


def _placing(points):
    """Hull facets and a placing triangulation of full-dimensional points in Z^r.

    ``points`` must be sorted, unique, and affinely span R^r with r >= 1.
    Returns ``(facets, simplices)`` where ``facets`` is a set of
    ``(normal, offset)`` with outward primitive normals and ``simplices`` is a
    list of index tuples.
    """
    r = len(points[0])
    chosen = [0]
    basis, piv = [], []
    for i in range(1, len(points)):
        d = [a - b for a, b in zip(points[i], points[0])]
        nb, npiv = _rref(basis + [d], r)
        if len(npiv) > len(piv):
            basis, piv = nb, npiv
            chosen.append(i)
            if len(chosen) == r + 1:
                break
    if len(chosen) != r + 1:
        raise ValueError("points are not full-dimensional")
    scale = r + 1
    centre = [sum(points[i][j] for i in chosen) for j in range(r)]

    def oriented(verts):
        a, b = _hyperplane([points[i] for i in verts])
        if _dot(a, centre) > scale * b:
            a = tuple(-x for x in a)
            b = -b
        return a, b

    facets = {}
    for skip in chosen:
        verts = tuple(i for i in chosen if i != skip)
        facets[verts] = oriented(verts)
    simplices = [tuple(chosen)]
    chosen_set = set(chosen)

    for i, v in enumerate(points):
        if i in chosen_set:
            continue
        visible = [vs for vs, (a, b) in facets.items() if _dot(a, v) > b]
        if not visible:
            continue
        ridges = Counter()
        for vs in visible:
            simplices.append(vs + (i,))
            for k in range(len(vs)):
                ridges[vs[:k] + vs[k + 1:]] += 1
            del facets[vs]
        for ridge, count in ridges.items():
            if count == 1:
                verts = tuple(sorted(ridge + (i,)))
                facets[verts] = oriented(verts)
    return set(facets.values()), simplices


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Polytope:
    """Convex hull of finitely many integer points.

    ``halfspaces`` lists ``(normal, offset)`` pairs meaning
    ``normal . x <= offset``; an equality of the affine hull appears as two
    opposite halfspaces.
    """

    dim: int
    vertices: tuple
    halfspaces: tuple
    affine_dim: int
    _pivots: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        for v in self.vertices:
            if len(v) != self.dim:
                raise DimensionMismatch("vertex length differs from polytope dimension")
            for a, b in self.halfspaces:
                if _dot(a, v) > b:
                    raise AssertionError("vertex violates a halfspace")

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.dim, self.vertices))

    def contains(self, point) -> bool:
        return all(_dot(a, point) <= b for a, b in self.halfspaces)

    def contains_polytope(self, other: "Polytope") -> bool:
        return all(self.contains(v) for v in other.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={list(self.vertices)})"


def _as_points(points) -> list:
    pts = [tuple(int(c) for c in p) for p in points]
    if not pts:
        raise ValueError("convex_hull needs at least one point")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimensionMismatch("points have different dimensions")
    return sorted(set(pts))


def convex_hull(points: Iterable[Sequence[int]]) -> Polytope:
    """Convex hull of integer points, keeping extreme points only."""
    pts = _as_points(points)
    n = len(pts[0])
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    basis, pivots = _rref(diffs, n)
    r = len(pivots)

    halfspaces = []
    for c in _integer_nullspace(basis, pivots, n):
        off = _dot(c, p0)
        halfspaces.append((c, off))
        halfspaces.append((tuple(-x for x in c), -off))

    def lift(a):
        full = [0] * n
        for coef, j in zip(a, pivots):
            full[j] = coef
        return tuple(full)

    if r == 0:
        vertices = [p0]
    else:
        proj = [tuple(p[j] for j in pivots) for p in pts]
        if r == 1:
            vals = [q[0] for q in proj]
            lo, hi = min(vals), max(vals)
            facets = {((-1,), -lo), ((1,), hi)}
        else:
            facets, _ = _placing(proj)
        facets = sorted(facets)
        vertices = []
        for p, q in zip(pts, proj):
            tight = [list(a) for a, b in facets if _dot(a, q) == b]
            if len(tight) >= r and _rank(tight, r) == r:
                vertices.append(p)
        halfspaces.extend((lift(a), b) for a, b in facets)
    return Polytope(n, tuple(vertices), tuple(halfspaces), r, tuple(pivots))


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    """``conv{p + q}`` over the vertices of ``P`` and ``Q``."""
    if P.dim != Q.dim:
        raise DimensionMismatch("Minkowski sum of polytopes of different dimension")
    sums = {tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices}
    return convex_hull(sums)


def minkowski_sum_all(polys: Sequence[Polytope]) -> Polytope:
    if not polys:
        raise ValueError("empty Minkowski sum")
    out = polys[0]
    for P in polys[1:]:
        out = minkowski_sum(out, P)
    return out


def dilate(P: Polytope, k: int) -> Polytope:
    """``k * P`` for a positive integer ``k``."""
    if int(k) != k or k < 1:
        raise ValueError(f"dilation factor must be a positive integer, got {k!r}")
    k = int(k)
    if k == 1:
        return P
    verts = tuple(sorted(tuple(k * c for c in v) for v in P.vertices))
    hs = tuple((a, k * b) for a, b in P.halfspaces)
    return Polytope(P.dim, verts, hs, P.affine_dim, P._pivots)


def point_polytope(point) -> Polytope:
    return convex_hull([point])


def standard_simplex(n: int, d: int = 1) -> Polytope:
    """``d`` times the standard simplex in R^n (origin and ``d * e_i``)."""
    pts = [(0,) * n] + [tuple(d if j == i else 0 for j in range(n)) for i in range(n)]
    return convex_hull(pts)


# ---------------------------------------------------------------------------
# lattice points


def lattice_point_array(P: Polytope, limit: int | None = None) -> np.ndarray:
    """Integer points of ``P`` as an ``(N, dim)`` array in lexicographic order.

    The bounding box is scanned coordinate by coordinate; a prefix is kept
    only if it can still satisfy every halfspace for some completion inside
    the box, and the final test is exact halfspace membership.
    """
    n = P.dim
    V = np.array(P.vertices, dtype=np.int64).reshape(-1, n)
    lo = V.min(axis=0)
    hi = V.max(axis=0)
    if P.halfspaces:
        A = np.array([a for a, _ in P.halfspaces], dtype=np.int64)
        b = np.array([b for _, b in P.halfspaces], dtype=np.int64)
    else:
        A = np.zeros((0, n), dtype=np.int64)
        b = np.zeros(0, dtype=np.int64)
    # smallest possible contribution of coordinates j..n-1 to each halfspace
    contrib = np.minimum(A * lo, A * hi)
    tail = np.zeros((A.shape[0], n + 1), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        tail[:, j] = tail[:, j + 1] + contrib[:, j]
    cap = None if limit is None else 4 * limit

    prefix = np.zeros((1, 0), dtype=np.int64)
    partial = np.zeros((1, A.shape[0]), dtype=np.int64)
    for j in range(n):
        vals = np.arange(lo[j], hi[j] + 1, dtype=np.int64)
        m = prefix.shape[0]
        prefix = np.hstack([np.repeat(prefix, len(vals), axis=0), np.tile(vals, m)[:, None]])
        partial = np.repeat(partial, len(vals), axis=0) + np.tile(vals, m)[:, None] * A[:, j][None, :]
        keep = np.all(partial + tail[:, j + 1][None, :] <= b[None, :], axis=1)
        prefix = prefix[keep]
        partial = partial[keep]
        if cap is not None and prefix.shape[0] > cap:
            raise BasisBudgetExceeded(prefix.shape[0], limit, "polytope")
    if limit is not None and prefix.shape[0] > limit:
        raise BasisBudgetExceeded(prefix.shape[0], limit, "polytope")
    return prefix


def lattice_points(P: Polytope, limit: int | None = None) -> list:
    """Integer points of ``P`` in lexicographic order."""
    return [tuple(int(c) for c in row) for row in lattice_point_array(P, limit)]


def count_lattice_points(P: Polytope, limit: int | None = None) -> int:
    return int(lattice_point_array(P, limit).shape[0])


def _unique_rows(a: np.ndarray) -> np.ndarray:
    if a.shape[0] == 0:
        return a
    return np.unique(a, axis=0)


def sumset(points: np.ndarray, k: int) -> np.ndarray:
    """k-fold sumset of a finite point set, lexicographically sorted."""
    base = _unique_rows(np.asarray(points, dtype=np.int64))
    out = base
    for _ in range(k - 1):
        out = _unique_rows((out[:, None, :] + base[None, :, :]).reshape(-1, base.shape[1]))
    return out


def is_normal(P: Polytope, kmax: int | None = None) -> bool:
    """Bounded normality test.

    Checks ``(kP) cap Z^n == (P cap Z^n) + ... + (P cap Z^n)`` for
    ``2 <= k <= kmax`` (default ``kmax = max(dim, 2)``). A ``True`` answer is
    evidence, not a proof, of normality.
    """
    if kmax is None:
        kmax = max(P.dim, 2)
    if kmax < 2:
        raise ValueError("kmax must be at least 2")
    base = lattice_point_array(P)
    acc = base
    for k in range(2, kmax + 1):
        acc = _unique_rows((acc[:, None, :] + base[None, :, :]).reshape(-1, P.dim))
        target = lattice_point_array(dilate(P, k))
        if acc.shape != target.shape or not np.array_equal(acc, target):
            return False
    return True


# ---------------------------------------------------------------------------
# volumes


def volume(P: Polytope) -> Fraction:
    """Exact Euclidean volume; zero for lower-dimensional polytopes."""
    n = P.dim
    if P.affine_dim < n:
        return Fraction(0)
    if n == 0:
        return Fraction(1)
    pts = sorted(P.vertices)
    if n == 1:
        return Fraction(pts[-1][0] - pts[0][0])
    _, simplices = _placing(pts)
    total = 0
    for s in simplices:
        base = pts[s[0]]
        total += abs(_det([[a - b for a, b in zip(pts[i], base)] for i in s[1:]]))
    return Fraction(total, math.factorial(n))


def mixed_volume(polys: Sequence[Polytope]) -> Fraction:
    """Mixed volume by inclusion-exclusion over Minkowski sums.

    Normalized so that ``MV(d1*Delta, ..., dn*Delta) = d1 * ... * dn``, i.e.
    the coefficient of ``l1*...*ln`` in ``vol(l1*P1 + ... + ln*Pn)``; this is
    the Bernstein bound on the number of torus solutions.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("mixed_volume needs at least one polytope")
    n = polys[0].dim
    if any(P.dim != n for P in polys):
        raise DimensionMismatch("polytopes have different dimensions")
    if len(polys) != n:
        raise ValueError(f"mixed volume in dimension {n} needs {n} polytopes, got {len(polys)}")
    total = Fraction(0)
    for size in range(1, n + 1):
        sign = (-1) ** (n - size)
        for subset in itertools.combinations(range(n), size):
            total += sign * volume(minkowski_sum_all([polys[i] for i in subset]))
    return total


# ---------------------------------------------------------------------------
# monomial bases


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered, duplicate-free list of exponent vectors with a reverse index."""

    points: tuple
    unit_first: bool = False
    index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        idx = {p: i for i, p in enumerate(self.points)}
        if len(idx) != len(self.points):
            raise ValueError("duplicate points in monomial basis")
        if self.unit_first and (not self.points or any(self.points[0])):
            raise ValueError("unit_first basis must start with the origin")
        object.__setattr__(self, "index", idx)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def array(self) -> np.ndarray:
        dim = len(self.points[0]) if self.points else 0
        return np.array(self.points, dtype=np.int64).reshape(-1, dim)

    @classmethod
    def from_points(cls, points, unit_first=False):
        """Basis from points; with ``unit_first`` the origin is moved to the front."""
        pts = [tuple(int(c) for c in p) for p in points]
        if unit_first:
            origin = (0,) * len(pts[0])
            if origin not in pts:
                raise ValueError("origin is not among the basis points")
            pts = [origin] + [p for p in pts if p != origin]
        return cls(tuple(pts), unit_first)
