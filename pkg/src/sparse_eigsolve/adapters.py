"""System builders for dense, trilinear and sphere-constrained trilinear problems."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from .assembly import DEFAULT_BUDGET, SystemSpec, normalize_spec
from .errors import BasisBudgetExceeded, MultiplicityWarning, NoAcceptedSolutions, RankDeficient
from .extractor import DEFAULT_EPSILON
from .lattice import Polytope, convex_hull, dilate, standard_simplex
from .laurent import INTEGER_BOX, LaurentPoly, random_generic, simplex_support
from .pipeline import SolveReport, solve

REAL_TOL = 1e-6


# dense systems ------------------------------------------------------------


def dense_system(d: int, degrees, n: int, seed: int = 0, style: str = INTEGER_BOX) -> SystemSpec:
    """Random dense system with ``deg fi = degrees[i-1]`` and ``deg f0 = d``.

    Every polynomial has all monomials of degree at most its own degree with
    seeded random coefficients (nonzero integers in [-10, 10] by default).
    Declared polytopes are the dilated standard simplices, so the row space
    is spanned by the monomials of degree at most ``d + sum(degrees)``.
    """
    degrees = [int(v) for v in degrees]
    if d < 1 or n < 1 or not degrees or min(degrees) < 1:
        raise ValueError("degrees and dimension must be positive")
    seeds = np.random.default_rng(seed).integers(0, 2**31, size=len(degrees) + 1)
    f0 = random_generic(simplex_support(n, d), int(seeds[0]), style)
    eqs = tuple(random_generic(simplex_support(n, di), int(s), style) for di, s in zip(degrees, seeds[1:]))
    declared = (standard_simplex(n, d),) + tuple(standard_simplex(n, di) for di in degrees)
    return SystemSpec(n, eqs, f0, declared, (1,) * len(declared), ((0,) * n,) * len(eqs))


# tensors ------------------------------------------------------------------


@dataclass(frozen=True)
class Tensor3:
    """Coefficients ``a[i, j, k]`` of ``l(x, y, z) = sum a_ijk x_i y_j z_k``."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 3 or min(a.shape) < 1:
            raise ValueError("a trilinear form needs a 3-way array with positive dimensions")
        if not np.all(np.isfinite(a)):
            raise ValueError("tensor entries must be finite")
        object.__setattr__(self, "entries", a)

    @property
    def dims(self) -> tuple:
        return self.entries.shape

    def __call__(self, x, y, z):
        return np.einsum("ijk,i,j,k->", self.entries, x, y, z)

    def rotated(self, Q1, Q2, Q3) -> "Tensor3":
        """Coefficients of ``(x, y, z) -> l(Q1^T x, Q2^T y, Q3^T z)``."""
        return Tensor3(np.einsum("ia,jb,kc,abc->ijk", Q1, Q2, Q3, self.entries))

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "entries": self.entries.tolist()}

    @classmethod
    def from_json(cls, obj) -> "Tensor3":
        try:
            dims = tuple(int(v) for v in obj["dims"])
            entries = np.asarray(obj["entries"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError("tensor JSON needs 'dims' and numeric 'entries'") from exc
        if len(dims) != 3 or entries.size != int(np.prod(dims)):
            raise ValueError(f"entries do not fill a tensor of dims {dims}")
        return cls(entries.reshape(dims))


# trilinear systems ---------------------------------------------------------


def _block_slices(dims):
    n, m, s = dims
    return slice(0, n), slice(n, n + m), slice(n + m, n + m + s)


def _trilinear_ok(f: LaurentPoly, dims) -> bool:
    for e in f.support:
        if any(v < 0 for v in e):
            return False
        for sl in _block_slices(dims):
            if sum(e[sl]) > 1:
                return False
    return True


def product_simplex(dims, a: int = 1) -> Polytope:
    """``a * (Delta_n x Delta_m x Delta_s)``."""
    blocks = []
    for k in dims:
        blocks.append([(0,) * k] + [tuple(a if t == i else 0 for t in range(k)) for i in range(k)])
    return convex_hull([sum(c, ()) for c in itertools.product(*blocks)])


@dataclass(frozen=True)
class TrilinearSpec:
    """Equations of multidegree at most (1, 1, 1) in blocks of sizes ``(n, m, s)``."""

    dims: tuple
    equations: tuple

    def __post_init__(self):
        dims = tuple(int(v) for v in self.dims)
        if len(dims) != 3 or min(dims) < 0 or sum(dims) < 1:
            raise ValueError("block sizes must be three non-negative integers, not all zero")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "equations", tuple(self.equations))
        if not self.equations:
            raise ValueError("need at least one equation")
        for i, f in enumerate(self.equations):
            if f.dim != sum(dims):
                raise ValueError(f"equation {i + 1} has {f.dim} variables, expected {sum(dims)}")
            if not _trilinear_ok(f, dims):
                raise ValueError(f"equation {i + 1} has multidegree exceeding (1, 1, 1)")

    @property
    def nvars(self) -> int:
        return sum(self.dims)


def trilinear_system(spec: TrilinearSpec, f0: LaurentPoly, degree: int | None = None) -> SystemSpec:
    """Product-simplex bases for a trilinear system.

    All declared polytopes are ``P = Delta_n x Delta_m x Delta_s``; rows are
    the lattice points of ``(degree + 1) P`` and multipliers those of
    ``degree * P``. The default degree is the number of equations.
    """
    if not _trilinear_ok(f0, spec.dims) or f0.dim != spec.nvars:
        raise ValueError("f0 must be trilinear in the same blocks")
    k = len(spec.equations)
    degree = k if degree is None else int(degree)
    if degree < 1:
        raise ValueError("degree must be at least 1")
    P = product_simplex(spec.dims)
    N = spec.nvars
    return SystemSpec(
        N,
        spec.equations,
        f0,
        (P,) * (k + 1),
        (1,) * (k + 1),
        ((0,) * N,) * k,
        ambient=dilate(P, degree + 1),
    )


def _chart_monomial(idx, dims):
    """Exponent of ``x_i y_j z_k`` with ``x_0 = y_0 = z_0 = 1``."""
    e = [0] * sum(dims)
    off = 0
    for i, k in zip(idx, dims):
        if i > 0:
            e[off + i - 1] += 1
        off += k
    return tuple(e)


def _form(a: np.ndarray, dims) -> LaurentPoly:
    terms = {}
    for idx, v in np.ndenumerate(a):
        if v != 0:
            key = _chart_monomial(idx, dims)
            terms[key] = terms.get(key, 0) + float(v)
    return LaurentPoly(sum(dims), terms)


def commutator_tensors(a: np.ndarray):
    """Tensors of ``l(x_j e_i - x_i e_j, y, z)`` and the same for y and z.

    Pairs are ordered by factor, then ``i < j`` lexicographically.
    """
    out = []
    for axis in range(3):
        size = a.shape[axis]
        for i in range(size):
            for j in range(i + 1, size):
                c = np.zeros_like(a)
                # coefficient of x_j in l(x_j e_i, .) is a[i, ...]
                src_i = np.take(a, i, axis=axis)
                src_j = np.take(a, j, axis=axis)
                sl_i = [slice(None)] * 3
                sl_j = [slice(None)] * 3
                sl_i[axis] = i
                sl_j[axis] = j
                c[tuple(sl_j)] += src_i
                c[tuple(sl_i)] -= src_j
                out.append(c)
    return out


def critical_point_system(a: Tensor3) -> tuple:
    """Critical-point equations of ``l`` on the chart ``x0 = y0 = z0 = 1``.

    Returns ``(TrilinearSpec, l)``; the spec holds every commutator minor,
    so it is overdetermined for blocks of size three or more.
    """
    dims = tuple(d - 1 for d in a.dims)
    eqs = [_form(c, dims) for c in commutator_tensors(a.entries)]
    eqs = [f for f in eqs if not f.is_zero]
    if not eqs:
        raise ValueError("the tensor has no non-trivial critical-point equations")
    return TrilinearSpec(dims, tuple(eqs)), _form(a.entries, dims)


def lagrange_system(a: Tensor3, kmax: int = 2) -> SystemSpec:
    """Homogeneous critical-point system of ``l`` on the product of unit spheres.

    Variables are ``x0..xn, y0..ym, z0..zs``. Equations are the commutator
    minors of every factor followed by the three sphere equations, and ``f0``
    is ``l`` itself. The normality check uses sumsets up to ``kmax``.
    """
    if not np.any(a.entries):
        raise ValueError("zero tensor")
    sizes = a.dims
    N = sum(sizes)

    def homog(t):
        terms = {}
        for (i, j, k), v in np.ndenumerate(t):
            if v != 0:
                e = [0] * N
                e[i] += 1
                e[sizes[0] + j] += 1
                e[sizes[0] + sizes[1] + k] += 1
                terms[tuple(e)] = terms.get(tuple(e), 0) + float(v)
        return LaurentPoly(N, terms)

    eqs = [homog(c) for c in commutator_tensors(a.entries)]
    eqs = [f for f in eqs if not f.is_zero]
    off = 0
    for size in sizes:
        terms = {(0,) * N: -1.0}
        for i in range(size):
            e = [0] * N
            e[off + i] = 2
            terms[tuple(e)] = 1.0
        eqs.append(LaurentPoly(N, terms))
        off += size
    return normalize_spec(homog(a.entries), eqs, kmax=kmax)


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix."""
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))[None, :]


@dataclass
class TrilinearMax:
    """Largest ``|l|`` on the product of unit spheres and where it is attained."""

    value: float
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    degree: int
    n_real: int
    n_accepted: int
    report: SolveReport = field(repr=False)


def _split_chart(point, dims):
    xs = []
    for sl in _block_slices(dims):
        xs.append(np.r_[1.0, point[sl].real])
    return xs


def _poly_mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return out


def singular_triple_count(dims) -> int:
    """Number of singular vector triples of a generic tensor of shape ``dims``.

    It is the coefficient of ``t1^(d1-1) t2^(d2-1) t3^(d3-1)`` in
    ``prod_i (s_i^di - t_i^di) / (s_i - t_i)`` with ``s_i = sum_{j != i} t_j``.
    """
    dims = tuple(int(d) for d in dims)
    total = {(0, 0, 0): 1}
    for i, d in enumerate(dims):
        s = {_unit(j, 3): 1 for j in range(3) if j != i}
        t = {_unit(i, 3): 1}
        powers_s, powers_t = [{(0, 0, 0): 1}], [{(0, 0, 0): 1}]
        for _ in range(d - 1):
            powers_s.append(_poly_mul(powers_s[-1], s))
            powers_t.append(_poly_mul(powers_t[-1], t))
        factor = {}
        for k in range(d):
            for e, c in _poly_mul(powers_s[k], powers_t[d - 1 - k]).items():
                factor[e] = factor.get(e, 0) + c
        total = _poly_mul(total, factor)
    return total.get(tuple(d - 1 for d in dims), 0)


def _chart_attempt(a, Qs, dims, aux, rng, epsilon, budget, max_degree, keep_matrix=False):
    """Solve the chart system of ``a`` rotated by ``Qs``; ``(result, error)``."""
    b = a.rotated(*Qs)
    tspec, ell = critical_point_system(b)
    if aux == "linear":
        coeffs = rng.uniform(-1.0, 1.0, size=tspec.nvars)
        f0 = LaurentPoly(tspec.nvars, {_unit(j, tspec.nvars): c for j, c in enumerate(coeffs)})
    else:
        f0 = ell
    top = len(tspec.equations) + 1 if max_degree is None else max_degree
    error = None
    for degree in range(1, top + 1):
        try:
            # repeated eigenvalues from points at infinity are routine on the chart
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", MultiplicityWarning)
                report = solve(trilinear_system(tspec, f0, degree), epsilon=epsilon, budget=budget,
                               do_polish=True, keep_matrix=keep_matrix)
        except RankDeficient as exc:
            error = exc
            continue
        except BasisBudgetExceeded as exc:
            return None, exc
        best, n_real = None, 0
        for cand in report.accepted:
            if np.abs(cand.point.imag).max() >= REAL_TOL:
                continue
            n_real += 1
            x, y, z = (v / np.linalg.norm(v) for v in _split_chart(cand.point, dims))
            val = float(b(x, y, z))
            if best is None or abs(val) > abs(best[0]):
                best = (val, x, y, z)
        if best is None:
            return None, NoAcceptedSolutions(f"no real critical point accepted at degree {degree}")
        val, x, y, z = best
        x, y, z = Qs[0].T @ x, Qs[1].T @ y, Qs[2].T @ z
        if val < 0:
            x = -x
        return TrilinearMax(abs(val), x, y, z, degree, n_real, len(report.accepted), report), None
    return None, error or NoAcceptedSolutions(f"no degree up to {top} gave a valid reduction")


def trilinear_max(
    a: Tensor3,
    seed: int = 0,
    *,
    epsilon: float = DEFAULT_EPSILON,
    budget: int = DEFAULT_BUDGET,
    max_degree: int | None = None,
    aux: str = "form",
    attempts: int = 3,
    keep_matrix: bool = False,
) -> TrilinearMax:
    """First singular value of a trilinear form.

    The critical points of ``l`` on the product of unit spheres are found on
    the chart ``x0 = y0 = z0 = 1``: the commutator equations are solved with
    product-simplex bases of increasing degree until the Schur reduction
    succeeds. The value is the largest ``|l(x, y, z)| / (|x| |y| |z|)`` over
    accepted real candidates.

    The first attempt uses the tensor as given. If it accepts fewer than the
    generic number of critical points (some may sit on the chart boundary),
    up to ``attempts - 1`` further attempts rotate every factor by a seeded
    random orthogonal matrix; the attempt with the most accepted points wins.

    ``aux`` selects ``f0``: ``"form"`` uses ``l`` itself and ``"linear"`` a
    seeded random linear form. ``"form"`` falls back to ``"linear"`` when no
    attempt accepts a real candidate. ``keep_matrix`` is passed to
    :func:`solve` so the winning report keeps its matrices.
    """
    if aux not in ("form", "linear"):
        raise ValueError("aux must be 'form' or 'linear'")
    if attempts < 1:
        raise ValueError("attempts must be at least 1")
    if not np.any(a.entries):
        return TrilinearMax(0.0, *(np.eye(d)[0] for d in a.dims), 0, 0, 0, None)
    dims = tuple(d - 1 for d in a.dims)
    if sum(dims) == 0:
        v = float(a.entries.ravel()[0])
        return TrilinearMax(abs(v), np.array([np.sign(v)]), np.ones(1), np.ones(1), 0, 1, 1, None)

    rng = np.random.default_rng(seed)
    expected = singular_triple_count(a.dims)
    best, error = None, None
    for attempt in range(attempts):
        if attempt == 0:
            Qs = [np.eye(d) for d in a.dims]
        else:
            Qs = [random_orthogonal(d, rng) for d in a.dims]
        result, err = _chart_attempt(a, Qs, dims, aux, rng, epsilon, budget, max_degree, keep_matrix)
        error = err or error
        if isinstance(err, BasisBudgetExceeded):
            break
        if result is not None and (best is None or result.n_accepted > best.n_accepted):
            best = result
        if best is not None and best.n_accepted >= expected:
            break
    if best is None:
        if aux == "form":
            return trilinear_max(a, seed, epsilon=epsilon, budget=budget, max_degree=max_degree,
                                 aux="linear", attempts=attempts, keep_matrix=keep_matrix)
        raise NoAcceptedSolutions(f"no real critical point passed identification ({error})")
    return best


def _unit(j, n):
    return tuple(1 if t == j else 0 for t in range(n))
