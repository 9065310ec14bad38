"""Independent checks: Sylvester resultants, a bivariate solver, brute-force lattice points.

Nothing here calls the geometry or linear-algebra code of the main pipeline.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .laurent import LaurentPoly

TRIM_TOL = 1e-11


@dataclass(frozen=True)
class UnivariatePoly:
    """Complex coefficients in ascending degree, trailing zeros trimmed."""

    coeffs: tuple

    def __post_init__(self):
        c = [complex(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def trimmed(cls, coeffs, rel_tol: float = TRIM_TOL) -> "UnivariatePoly":
        """Drop coefficients below ``rel_tol`` times the largest one."""
        c = np.asarray(coeffs, dtype=complex)
        if c.size == 0:
            return cls(())
        big = np.abs(c).max()
        c = np.where(np.abs(c) <= rel_tol * big, 0, c)
        return cls(tuple(c))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        out = 0j
        for c in reversed(self.coeffs):
            out = out * t + c
        return out

    def roots(self) -> np.ndarray:
        """Eigenvalues of the companion matrix."""
        if self.is_zero:
            raise ValueError("the zero polynomial has no finite root set")
        d = self.degree
        if d == 0:
            return np.zeros(0, dtype=complex)
        c = np.asarray(self.coeffs, dtype=complex)
        C = np.zeros((d, d), dtype=complex)
        C[1:, :-1] = np.eye(d - 1)
        C[:, -1] = -c[:-1] / c[-1]
        return np.linalg.eigvals(C)


def _terms(f: LaurentPoly):
    return [(tuple(e), complex(c)) for e, c in f.items()]


def _shifted(f: LaurentPoly):
    """Terms with each variable's exponents moved to start at zero."""
    t = _terms(f)
    lo = [min(e[j] for e, _ in t) for j in range(2)]
    return [((e[0] - lo[0], e[1] - lo[1]), c) for e, c in t]


def _eval(terms, x, y):
    return sum(c * x ** e[0] * y ** e[1] for e, c in terms)


def _coeff_in(terms, var, other_value):
    """Coefficients in ``var`` after substituting the other variable."""
    deg = max(e[var] for e, _ in terms)
    out = [0j] * (deg + 1)
    for e, c in terms:
        out[e[var]] += c * other_value ** e[1 - var]
    return out


def sylvester_resultant(f: LaurentPoly, g: LaurentPoly, eliminate: int = 1) -> UnivariatePoly:
    """Resultant of ``f`` and ``g`` with respect to variable ``eliminate``.

    Both are first multiplied by monomials to clear negative exponents. The
    determinant of the Sylvester matrix is sampled at roots of unity and
    interpolated by an inverse FFT; the result is a polynomial in the other
    variable (possibly zero when ``f`` and ``g`` share a factor).
    """
    if f.dim != 2 or g.dim != 2:
        raise ValueError("the Sylvester oracle handles two variables")
    if eliminate not in (0, 1):
        raise ValueError("eliminate must be 0 or 1")
    tf, tg = _shifted(f), _shifted(g)
    keep = 1 - eliminate
    m = max(e[eliminate] for e, _ in tf)
    n = max(e[eliminate] for e, _ in tg)
    if m == 0 or n == 0:
        raise ValueError("both polynomials must involve the eliminated variable")
    df = max(e[keep] for e, _ in tf)
    dg = max(e[keep] for e, _ in tg)
    bound = m * dg + n * df
    N = bound + 1
    samples = np.empty(N, dtype=complex)
    for k in range(N):
        t = np.exp(2j * np.pi * k / N)
        a = _coeff_in(tf, eliminate, t)
        b = _coeff_in(tg, eliminate, t)
        S = np.zeros((m + n, m + n), dtype=complex)
        for r in range(n):
            S[r, r:r + m + 1] = a[::-1]
        for r in range(m):
            S[n + r, r:r + n + 1] = b[::-1]
        samples[k] = np.linalg.det(S)
    # samples at w^k are sum_j c_j w^(jk); the forward FFT over N inverts that
    coeffs = np.fft.fft(samples) / N
    scale = max(1.0, float(np.abs(samples).max()))
    if np.abs(coeffs).max() <= TRIM_TOL * scale * N:
        return UnivariatePoly(())
    return UnivariatePoly.trimmed(coeffs)


def _newton2(tf, tg, x, y, iters=30):
    def grad(terms, x, y):
        dx = sum(c * e[0] * x ** (e[0] - 1) * y ** e[1] for e, c in terms if e[0])
        dy = sum(c * e[1] * x ** e[0] * y ** (e[1] - 1) for e, c in terms if e[1])
        return dx, dy

    best = (abs(_eval(tf, x, y)) + abs(_eval(tg, x, y)), x, y)
    for _ in range(iters):
        F = np.array([_eval(tf, x, y), _eval(tg, x, y)])
        J = np.array([grad(tf, x, y), grad(tg, x, y)])
        try:
            dx, dy = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        x, y = x + dx, y + dy
        r = abs(_eval(tf, x, y)) + abs(_eval(tg, x, y))
        if not np.isfinite(r):
            break
        if r < best[0]:
            best = (r, x, y)
        if abs(dx) + abs(dy) <= 1e-15 * (abs(x) + abs(y)):
            break
    return best[1], best[2]


def bivariate_solve(f: LaurentPoly, g: LaurentPoly, zero_tol: float = 1e-9) -> list:
    """Common roots of ``f`` and ``g`` with both coordinates nonzero.

    ``x1`` values are roots of the resultant eliminating ``x2``; each ``x2``
    is the root of ``f(x1, .)`` or ``g(x1, .)`` with the smallest combined
    residual, after which both coordinates are refined by Newton's method.
    Raises ``ValueError`` if the resultant vanishes identically.
    """
    tf, tg = _shifted(f), _shifted(g)
    has_y = [max(e[1] for e, _ in t) > 0 for t in (tf, tg)]
    if all(has_y):
        res = sylvester_resultant(f, g, eliminate=1)
    elif any(has_y):
        # one equation is univariate in x1 already
        free = tf if not has_y[0] else tg
        res = UnivariatePoly.trimmed(_coeff_in(free, 0, 1.0), 0.0)
    else:
        raise ValueError("neither polynomial involves x2: the solution set is not finite")
    if res.is_zero:
        raise ValueError("resultant is identically zero: the curves share a component")
    norm_f = sum(abs(c) for _, c in tf)
    norm_g = sum(abs(c) for _, c in tg)
    out = []
    for x in res.roots():
        if abs(x) <= zero_tol:
            continue
        cands = []
        for terms in (tf, tg):
            uni = UnivariatePoly.trimmed(_coeff_in(terms, 1, x), 1e-14)
            if uni.is_zero or uni.degree == 0:
                continue
            cands.extend(uni.roots())
        if not cands:
            continue
        y = min(cands, key=lambda y: abs(_eval(tf, x, y)) + abs(_eval(tg, x, y)))
        x2, y2 = _newton2(tf, tg, complex(x), complex(y))
        if abs(x2) <= zero_tol or abs(y2) <= zero_tol:
            continue
        if abs(_eval(tf, x2, y2)) < 1e-8 * (1 + norm_f) and abs(_eval(tg, x2, y2)) < 1e-8 * (1 + norm_g):
            out.append((complex(x2), complex(y2)))
    return out


def _feasible(vertices, point) -> bool:
    """Exact phase-one simplex: is ``point`` a convex combination of ``vertices``?"""
    m = len(vertices)
    d = len(point)
    # rows: sum l_i v_i = point, sum l_i = 1; artificial variable per row
    rows = []
    for r in range(d + 1):
        coeffs = [Fraction(v[r]) if r < d else Fraction(1) for v in vertices]
        rhs = Fraction(point[r]) if r < d else Fraction(1)
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
        rows.append(coeffs + [Fraction(int(k == r)) for k in range(d + 1)] + [rhs])
    ncols = m + d + 1
    basis = [m + r for r in range(d + 1)]
    # objective: minimize sum of artificials, reduced costs kept as a row
    obj = [Fraction(0)] * (ncols + 1)
    for row in rows:
        for k in range(ncols + 1):
            obj[k] -= row[k]
    for k in range(m, ncols):
        obj[k] = Fraction(0)
    while True:
        enter = next((k for k in range(ncols) if obj[k] < 0), None)
        if enter is None:
            break
        ratios = [(rows[r][-1] / rows[r][enter], basis[r], r) for r in range(d + 1) if rows[r][enter] > 0]
        if not ratios:
            break
        _, _, leave = min(ratios)
        piv = rows[leave][enter]
        rows[leave] = [v / piv for v in rows[leave]]
        for r in range(d + 1):
            if r != leave and rows[r][enter] != 0:
                f = rows[r][enter]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[leave])]
        f = obj[enter]
        obj = [a - f * b for a, b in zip(obj, rows[leave])]
        basis[leave] = enter
    return obj[-1] == 0


def brute_lattice_points(P) -> list:
    """Integer points of ``conv(P.vertices)`` by exact linear feasibility.

    Scans the bounding box of the vertices in lexicographic order.
    """
    verts = [tuple(int(c) for c in v) for v in P.vertices]
    d = len(verts[0])
    lo = [min(v[j] for v in verts) for j in range(d)]
    hi = [max(v[j] for v in verts) for j in range(d)]
    vs = set(verts)
    out = []
    for pt in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if pt in vs or _feasible(verts, pt):
            out.append(pt)
    return out


def audit_residuals(system, points) -> np.ndarray:
    """Matrix of ``|f_i(x)|`` over points (rows) and equations (columns)."""
    eqs = [_terms(f) for f in system]
    out = np.zeros((len(points), len(eqs)))
    for r, x in enumerate(points):
        for c, t in enumerate(eqs):
            out[r, c] = abs(sum(coef * np.prod(np.asarray(x, dtype=complex) ** np.array(e)) for e, coef in t))
    return out
