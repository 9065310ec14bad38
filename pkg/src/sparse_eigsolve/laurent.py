"""Laurent polynomials as sparse maps from exponent vectors to coefficients."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch
from .lattice import Polytope, convex_hull

INTEGER_BOX = "integer-box"
UNIT_COMPLEX = "unit-complex"
UNIFORM = "uniform"


def _is_zero(c) -> bool:
    return c == 0


class LaurentPoly:
    """A Laurent polynomial in ``dim`` variables.

    Coefficients may be any numbers; the solver uses complex doubles, while
    ``int``/``Fraction`` coefficients keep products exact. Terms are stored in
    lexicographic order of their exponents and zero coefficients are dropped.
    """

    __slots__ = ("dim", "_terms", "_exps", "_coeffs")

    def __init__(self, dim: int, terms: Mapping[Sequence[int], Number] | None = None):
        self.dim = int(dim)
        merged = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.dim:
                raise DimensionMismatch(f"exponent {exp} does not have length {self.dim}")
            if isinstance(c, (float, complex, np.floating, np.complexfloating)):
                if not np.isfinite(c):
                    raise ValueError(f"non-finite coefficient {c!r}")
                c = complex(c) if isinstance(c, (complex, np.complexfloating)) else float(c)
            merged[exp] = merged.get(exp, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in merged.items() if not _is_zero(c)))
        self._exps = None
        self._coeffs = None

    # construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, dim, c=1):
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, exponent, c=1):
        return cls(len(exponent), {tuple(exponent): c})

    @classmethod
    def variable(cls, dim, j, c=1):
        return cls(dim, {tuple(1 if i == j else 0 for i in range(dim)): c})

    # accessors -----------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    @property
    def support(self) -> list:
        return [e for e, _ in self._terms]

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def nterms(self) -> int:
        return len(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def exponents(self) -> np.ndarray:
        if self._exps is None:
            self._exps = np.array([e for e, _ in self._terms], dtype=np.int64).reshape(-1, self.dim)
        return self._exps

    @property
    def coefficients(self) -> np.ndarray:
        if self._coeffs is None:
            self._coeffs = np.array([complex(c) for _, c in self._terms], dtype=complex)
        return self._coeffs

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coefficients.imag == 0))

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self._terms)

    def coefficient(self, exponent) -> Number:
        return dict(self._terms).get(tuple(exponent), 0)

    def min_exponents(self) -> tuple:
        return tuple(int(v) for v in self.exponents.min(axis=0))

    # evaluation ----------------------------------------------------------

    def _check_point(self, x):
        x = np.asarray(x, dtype=complex)
        if x.shape[-1] != self.dim:
            raise DimensionMismatch(f"point has {x.shape[-1]} coordinates, polynomial has {self.dim} variables")
        return x

    def evaluate(self, x) -> complex:
        x = self._check_point(x)
        if self.is_zero:
            return 0j
        E = self.exponents
        zero = x == 0
        if zero.any() and np.any(E[:, zero] < 0):
            raise ZeroDivisionError("zero coordinate raised to a negative power")
        return complex(np.prod(x[None, :] ** E, axis=1) @ self.coefficients)

    __call__ = evaluate

    def evaluate_many(self, X) -> np.ndarray:
        """Values at each row of ``X``."""
        X = self._check_point(np.atleast_2d(X))
        if self.is_zero:
            return np.zeros(X.shape[0], dtype=complex)
        E = self.exponents
        zero = X == 0
        if zero.any() and np.any((E[None, :, :] < 0) & zero[:, None, :]):
            raise ZeroDivisionError("zero coordinate raised to a negative power")
        return np.prod(X[:, None, :] ** E[None, :, :], axis=2) @ self.coefficients

    def gradient(self, x) -> np.ndarray:
        """Vector of partial derivatives at ``x``."""
        x = self._check_point(x)
        out = np.zeros(self.dim, dtype=complex)
        if self.is_zero:
            return out
        E = self.exponents
        c = self.coefficients
        for j in range(self.dim):
            Ej = E.copy()
            Ej[:, j] -= 1
            mask = E[:, j] != 0
            if mask.any():
                out[j] = np.prod(x[None, :] ** Ej[mask], axis=1) @ (c[mask] * E[mask, j])
        return out

    # arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.dim != self.dim:
                raise DimensionMismatch("polynomials live in different numbers of variables")
            return other
        if isinstance(other, Number):
            return LaurentPoly.constant(self.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms:
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(self.dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.dim, {e: -c for e, c in self._terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def shift(self, exponent) -> "LaurentPoly":
        """Multiply by the monomial ``x**exponent``."""
        exponent = tuple(exponent)
        return LaurentPoly(self.dim, {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self._terms})

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, self._terms))

    def __repr__(self):
        if self.is_zero:
            return f"LaurentPoly({self.dim}, 0)"
        parts = []
        for e, c in self._terms:
            mono = "*".join(
                f"x{j + 1}" if k == 1 else f"x{j + 1}^{k}" for j, k in enumerate(e) if k
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # serialization -------------------------------------------------------

    def to_json(self) -> list:
        out = []
        for e, c in self._terms:
            c = complex(c)
            out.append({"exponents": list(e), "coeff": [c.real, c.imag]})
        return out

    @classmethod
    def from_json(cls, terms, dim: int | None = None) -> "LaurentPoly":
        if not isinstance(terms, list):
            raise ValueError("a polynomial must be a list of terms")
        parsed = {}
        for t in terms:
            try:
                exp = tuple(int(v) for v in t["exponents"])
                if any(float(v) != int(v) for v in t["exponents"]):
                    raise ValueError("exponents must be integers")
                coeff = t["coeff"]
                if isinstance(coeff, (int, float)):
                    c = complex(coeff)
                elif len(coeff) == 2:
                    c = complex(float(coeff[0]), float(coeff[1]))
                else:
                    raise ValueError("coeff must be [re, im]")
            except (KeyError, TypeError) as exc:
                raise ValueError(f"malformed term {t!r}") from exc
            parsed[exp] = parsed.get(exp, 0) + c
        if dim is None:
            if not parsed:
                raise ValueError("cannot infer dimension of an empty polynomial")
            dim = len(next(iter(parsed)))
        return cls(dim, parsed)


def newton_polytope(f: LaurentPoly) -> Polytope:
    """Convex hull of the support of ``f``."""
    if f.is_zero:
        raise ValueError("the zero polynomial has no Newton polytope")
    return convex_hull(f.support)


def evaluate(f: LaurentPoly, x) -> complex:
    return f.evaluate(x)


def mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Product by convolution of the term maps; exact cancellations vanish."""
    if f.dim != g.dim:
        raise DimensionMismatch("polynomials live in different numbers of variables")
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPoly(f.dim, out)


def shift_to_origin(f: LaurentPoly) -> LaurentPoly:
    """Divide ``f`` by its lexicographically smallest monomial."""
    if f.is_zero:
        raise ValueError("cannot shift the zero polynomial")
    lead = f.support[0]
    if not any(lead):
        return f
    return f.shift(tuple(-e for e in lead))


def random_generic(support, seed: int, style: str = INTEGER_BOX) -> LaurentPoly:
    """Polynomial with the given support and seeded random coefficients.

    ``integer-box`` draws nonzero integers in [-10, 10], ``uniform`` draws
    reals uniformly from [-1, 1] and ``unit-complex`` draws complex numbers
    of modulus one with uniform phase.
    """
    support = [tuple(int(c) for c in p) for p in support]
    if not support:
        raise ValueError("empty support")
    if len(set(support)) != len(support):
        raise ValueError("support has repeated exponents")
    rng = np.random.default_rng(seed)
    if style == INTEGER_BOX:
        mags = rng.integers(1, 11, size=len(support))
        signs = rng.choice([-1, 1], size=len(support))
        coeffs = [int(m * s) for m, s in zip(mags, signs)]
    elif style == UNIFORM:
        coeffs = [float(c) for c in rng.uniform(-1.0, 1.0, size=len(support))]
    elif style == UNIT_COMPLEX:
        phases = rng.uniform(0.0, 2 * math.pi, size=len(support))
        coeffs = [complex(math.cos(t), math.sin(t)) for t in phases]
    else:
        raise ValueError(f"unknown coefficient style {style!r}")
    return LaurentPoly(len(support[0]), dict(zip(support, coeffs)))


def unit_simplex_support(dim: int) -> list:
    """``{0, e_1, ..., e_n}``."""
    return [(0,) * dim] + [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]


def simplex_support(dim: int, degree: int) -> list:
    """Exponents of total degree at most ``degree``, lexicographic."""
    out = []

    def rec(prefix, left):
        if len(prefix) == dim:
            out.append(tuple(prefix))
            return
        for v in range(left + 1):
            rec(prefix + [v], left - v)

    rec([], degree)
    return out


def as_fraction_poly(f: LaurentPoly) -> LaurentPoly:
    """Copy of ``f`` with coefficients converted to exact rationals."""
    out = {}
    for e, c in f.items():
        c = complex(c)
        if c.imag:
            raise ValueError("only real coefficients convert to Fraction")
        out[e] = Fraction(c.real)
    return LaurentPoly(f.dim, out)
