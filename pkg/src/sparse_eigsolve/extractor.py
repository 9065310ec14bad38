"""Recover points from left eigenvectors and decide which are solutions."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .assembly import ResultantMatrix, SystemSpec
from .eigensolver import EigenPair
from .errors import CoordinateUnrecoverable, VanishingLeadCoordinate
from .lattice import MonomialBasis

VANISH_TOL = 1e-10
DEFAULT_EPSILON = 1e-8
DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class ExtractionPlan:
    """For each coordinate, alternative integer combinations of basis indices.

    ``combos[j]`` is a tuple of alternatives; each alternative is a tuple of
    ``(index, exponent)`` pairs (0-based into ``B0``, whose point 0 is the
    origin) with ``sum exponent * points[index] == e_j``. Quotients
    ``x_j = v[m + e_j] / v[m]`` come first (direct lookup is the case
    ``m = 0``); a general lattice combination is used only when no quotient
    exists.
    """

    dim: int
    combos: tuple
    _quotients: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_quotients", tuple(self._split(j) for j in range(self.dim)))

    def check(self, basis: MonomialBasis) -> bool:
        for j, alts in enumerate(self.combos):
            target = tuple(1 if i == j else 0 for i in range(self.dim))
            for alt in alts:
                total = [0] * self.dim
                for idx, c in alt:
                    for t, m in enumerate(basis.points[idx]):
                        total[t] += c * m
                if tuple(total) != target:
                    return False
        return True

    def quotients(self, j: int):
        """``(numerators, denominators)`` index arrays of the quotient alternatives."""
        return self._quotients[j]

    def _split(self, j):
        num, den = [], []
        for alt in self.combos[j]:
            if len(alt) == 1 and alt[0][1] == 1:
                num.append(alt[0][0])
                den.append(0)
            elif len(alt) == 2 and alt[0][1] == 1 and alt[1][1] == -1:
                num.append(alt[0][0])
                den.append(alt[1][0])
        return np.array(num, dtype=np.intp), np.array(den, dtype=np.intp)


def _egcd(a: int, b: int):
    """``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        qt, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _combine(x, a, y, b):
    """Combination ``a*x + b*y`` of sparse integer dicts."""
    out = {}
    for src, k in ((x, a), (y, b)):
        if k:
            for i, c in src.items():
                out[i] = out.get(i, 0) + k * c
    return {i: c for i, c in out.items() if c}


class _Echelon:
    """Integer row echelon basis of a lattice, tracking generator combinations."""

    def __init__(self, dim):
        self.dim = dim
        self.rows = {}  # pivot column -> (vector, combo)

    def insert(self, vec, combo):
        vec = list(vec)
        for col in range(self.dim):
            if vec[col] == 0:
                continue
            if col not in self.rows:
                if vec[col] < 0:
                    vec = [-v for v in vec]
                    combo = {i: -c for i, c in combo.items()}
                self.rows[col] = (vec, combo)
                return
            bvec, bcombo = self.rows[col]
            a, b = bvec[col], vec[col]
            g, s, t = _egcd(a, b)
            piv = [s * u + t * v for u, v in zip(bvec, vec)]
            rest = [(a // g) * v - (b // g) * u for u, v in zip(bvec, vec)]
            self.rows[col] = (piv, _combine(bcombo, s, combo, t))
            combo = _combine(combo, a // g, bcombo, -(b // g))
            vec = rest

    def is_unimodular(self):
        return len(self.rows) == self.dim and all(abs(self.rows[c][0][c]) == 1 for c in self.rows)

    def express(self, target):
        target = list(target)
        combo = {}
        for col in range(self.dim):
            if target[col] == 0:
                continue
            if col not in self.rows:
                return None
            bvec, bcombo = self.rows[col]
            f, r = divmod(target[col], bvec[col])
            if r:
                return None
            target = [u - f * v for u, v in zip(target, bvec)]
            combo = _combine(combo, 1, bcombo, f)
        return combo


def build_extraction_plan(B0: MonomialBasis) -> ExtractionPlan:
    """Integer recipes ``x_j = prod v[i] ** c_i`` for every coordinate.

    Collects direct lookup of ``e_j`` and every quotient
    ``v[m + e_j] / v[m]`` inside ``B0``; when there is none, a general
    combination comes from an integer echelon form of the basis exponents.
    """
    points = B0.points
    if not points or any(points[0]):
        raise ValueError("B0 must start with the origin")
    dim = len(points[0])
    index = B0.index
    echelon = None
    combos = []
    for j in range(dim):
        unit = tuple(1 if i == j else 0 for i in range(dim))
        alts = []
        if unit in index:
            alts.append(((index[unit], 1),))
        for b, m in enumerate(points[1:], start=1):
            up = tuple(u + v for u, v in zip(m, unit))
            if up in index:
                alts.append(((index[up], 1), (b, -1)))
        if not alts:
            if echelon is None:
                echelon = _Echelon(dim)
                for b, m in enumerate(points[1:], start=1):
                    echelon.insert(m, {b: 1})
                    if echelon.is_unimodular():
                        break
            combo = echelon.express(unit)
            if combo is None:
                raise CoordinateUnrecoverable(j)
            alts.append(tuple(sorted(combo.items())))
        combos.append(tuple(alts))
    return ExtractionPlan(dim, tuple(combos))


@dataclass(frozen=True)
class CandidateSolution:
    """A point read off an eigenvector, with its identification verdict.

    ``residuals`` lists ``|f_i(x)|`` for ``i = 1..k`` followed by
    ``|f0(x) - eigenvalue|``; it is empty until :func:`identify` runs.
    """

    point: np.ndarray
    eigenvalue: complex
    source_vector: np.ndarray
    residuals: tuple = ()
    accepted: bool = False
    reason: str | None = None
    threshold: float | None = None

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else np.inf

    def to_json(self) -> dict:
        out = {
            "point": [[float(z.real), float(z.imag)] for z in self.point],
            "eigenvalue": [float(self.eigenvalue.real), float(self.eigenvalue.imag)],
            "residuals": [float(r) for r in self.residuals],
            "accepted": bool(self.accepted),
        }
        if self.reason:
            out["reason"] = self.reason
        return out


def extract(pair: EigenPair, plan: ExtractionPlan, vanish_tol: float = VANISH_TOL) -> CandidateSolution:
    """Read a point off a left eigenvector.

    Each coordinate is taken from the quotient ``w[m + e_j] / w[m]`` whose
    denominator is largest in modulus, which is the best-conditioned choice
    and needs no normalization. Coordinates without a quotient use their
    lattice combination on ``v = w / w[0]``. ``source_vector`` is ``v``.

    Raises :class:`VanishingLeadCoordinate` when ``w[0]`` is negligible
    (below ``vanish_tol`` relative to the largest entry) and no quotient
    with a non-negligible denominator is available.
    """
    w = np.asarray(pair.left_vector, dtype=complex)
    big = float(np.abs(w).max()) if w.size else 0.0
    if big == 0.0:
        raise VanishingLeadCoordinate("zero eigenvector")
    floor = vanish_tol * big
    lead_ok = abs(w[0]) > floor
    x = np.empty(plan.dim, dtype=complex)
    reason = None
    for j in range(plan.dim):
        num, den = plan.quotients(j)
        if num.size:
            mags = np.abs(w[den])
            k = int(np.argmax(mags))
            if mags[k] > floor:
                x[j] = w[num[k]] / w[den[k]]
                continue
        if not lead_ok:
            raise VanishingLeadCoordinate("eigenvector has no weight on the monomial 1")
        v = w / w[0]
        vfloor = vanish_tol * float(np.abs(v).max())
        for alt in plan.combos[j]:
            if all(c > 0 or abs(v[i]) > vfloor for i, c in alt):
                val = 1.0 + 0j
                for i, c in alt:
                    val *= v[i] ** c
                x[j] = val
                break
        else:
            x[j] = np.nan
            reason = f"vanishing eigenvector entries block x{j + 1}"
    source = w / w[0] if lead_ok else w / w[int(np.argmax(np.abs(w)))]
    return CandidateSolution(x, complex(pair.value), source, reason=reason)


def one_norm_K(M) -> float:
    """Largest absolute column sum of ``M``."""
    if isinstance(M, ResultantMatrix):
        return M.one_norm
    return float(np.abs(np.asarray(M)).sum(axis=0).max())


def _residuals(x, system: SystemSpec, eigenvalue) -> tuple:
    res = [abs(f(x)) for f in system.equations]
    res.append(abs(system.aux(x) - eigenvalue))
    return tuple(float(r) for r in res)


def identify(candidate: CandidateSolution, system: SystemSpec, M, epsilon: float = DEFAULT_EPSILON) -> CandidateSolution:
    """Accept iff every residual is below ``(K + 1) * epsilon`` with ``K = ||M||_1``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    thr = (one_norm_K(M) + 1.0) * epsilon
    x = candidate.point
    if candidate.reason is not None or not np.all(np.isfinite(x)):
        return replace(candidate, residuals=(), accepted=False, threshold=thr,
                       reason=candidate.reason or "non-finite coordinate")
    if np.any(x == 0):
        return replace(candidate, residuals=(), accepted=False, threshold=thr, reason="zero coordinate")
    try:
        res = _residuals(x, system, candidate.eigenvalue)
    except (ZeroDivisionError, FloatingPointError, OverflowError):
        return replace(candidate, residuals=(), accepted=False, threshold=thr, reason="evaluation failed")
    if not all(np.isfinite(res)):
        return replace(candidate, residuals=res, accepted=False, threshold=thr, reason="non-finite residual")
    ok = all(r < thr for r in res)
    return replace(candidate, residuals=res, accepted=ok, threshold=thr,
                   reason=None if ok else "residual above (K+1)*epsilon")


def _max_eq(x, equations):
    return max(abs(f(x)) for f in equations)


def polish(candidate: CandidateSolution, system: SystemSpec, max_iters: int = 20) -> CandidateSolution:
    """Damped Gauss-Newton on ``f1..fk``; never increases the largest ``|f_i|``.

    The eigenvalue is left as is; the returned candidate carries the new
    point but no verdict, so it has to be identified again.
    """
    x0 = np.asarray(candidate.point, dtype=complex)
    if max_iters <= 0 or not np.all(np.isfinite(x0)) or np.any(x0 == 0):
        return candidate
    eqs = system.equations
    try:
        start = _max_eq(x0, eqs)
    except ZeroDivisionError:
        return candidate
    x, best = x0.copy(), start
    for _ in range(max_iters):
        if best == 0:
            break
        Fx = np.array([f(x) for f in eqs])
        J = np.array([f.gradient(x) for f in eqs])
        step = np.linalg.lstsq(J, -Fx, rcond=None)[0]
        t, improved = 1.0, False
        for _ in range(12):
            y = x + t * step
            if np.all(np.isfinite(y)) and not np.any(y == 0):
                try:
                    val = _max_eq(y, eqs)
                except ZeroDivisionError:
                    val = np.inf
                if val < best:
                    x, best, improved = y, val, True
                    break
            t /= 2
        if not improved:
            break
    if best >= start:
        return candidate
    return replace(candidate, point=x, residuals=(), accepted=False, reason=None)


def dedupe(candidates, rel_tol: float = DEDUP_TOL) -> list:
    """Merge accepted candidates that agree to ``rel_tol`` in relative max-norm.

    Input order is kept; each cluster is represented by its member with the
    smallest largest residual.
    """
    kept = []
    for c in candidates:
        for n, k in enumerate(kept):
            scale = max(1.0, float(np.abs(k.point).max()), float(np.abs(c.point).max()))
            if np.abs(k.point - c.point).max() <= rel_tol * scale:
                if c.max_residual < k.max_residual:
                    kept[n] = c
                break
        else:
            kept.append(c)
    return kept
