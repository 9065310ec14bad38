"""End-to-end solve: bases, matrix, Schur reduction, eigenvectors, identification."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .assembly import DEFAULT_BUDGET, SystemSpec, assemble, build_bases, ResultantMatrix
from .eigensolver import TOL_EIG, schur_reduce, left_eigen, SchurReduction
from .errors import MultiplicityWarning, VanishingLeadCoordinate
from .extractor import (
    DEFAULT_EPSILON,
    VANISH_TOL,
    CandidateSolution,
    build_extraction_plan,
    dedupe,
    extract,
    identify,
    polish,
)

NEAR_MISS = 1e3


@dataclass
class SolveReport:
    """Outcome of one pipeline run."""

    accepted: list
    rejected: list
    p: int
    q: int
    p_i: tuple
    rank22: int
    condition22: float
    linear_residual: float
    K: float
    epsilon: float
    n_eigenpairs: int
    dropped_eigenpairs: int
    timings: dict = field(default_factory=dict)
    matrix: ResultantMatrix | None = field(default=None, repr=False)
    reduction: SchurReduction | None = field(default=None, repr=False)
    eigenpairs: list = field(default_factory=list, repr=False)

    def to_json(self, emit: str = "solutions") -> dict:
        out = {
            "solutions": [c.to_json() for c in self.accepted],
            "count": len(self.accepted),
        }
        if emit == "full":
            out["rejected"] = [c.to_json() for c in self.rejected]
            out["bases"] = {"p": self.p, "q": self.q, "p_i": list(self.p_i)}
            out["diagnostics"] = {
                "rank22": self.rank22,
                "condition22": float(self.condition22),
                "linear_residual": float(self.linear_residual),
                "K": float(self.K),
                "epsilon": float(self.epsilon),
                "eigenpairs": self.n_eigenpairs,
                "dropped_eigenpairs": self.dropped_eigenpairs,
            }
            out["timings"] = {k: float(v) for k, v in self.timings.items()}
        return out


def solve(
    spec: SystemSpec,
    *,
    epsilon: float = DEFAULT_EPSILON,
    tol_rank: float | None = None,
    tol_eig: float = TOL_EIG,
    budget: int = DEFAULT_BUDGET,
    do_polish: bool = False,
    vanish_tol: float = VANISH_TOL,
    keep_matrix: bool = False,
) -> SolveReport:
    """Run every step on ``spec`` and identify the solutions.

    With ``do_polish`` candidates that miss the threshold by less than a
    factor ``1e3`` are refined by Newton steps and identified again.
    Raises :class:`RankDeficient` when the Schur reduction is not possible.
    """
    t = {}
    t0 = time.perf_counter()
    bases = build_bases(spec, budget)
    t["bases"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    M = assemble(spec, bases)
    t["assemble"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    red = schur_reduce(M, tol_rank)
    t["solve_F"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", MultiplicityWarning)
        pairs = left_eigen(red.R, tol_eig)
    for w in caught:
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    t["eigen"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    plan = build_extraction_plan(bases.B0)
    K = M.one_norm
    accepted, rejected = [], []
    for pair in pairs:
        try:
            cand = extract(pair, plan, vanish_tol)
        except VanishingLeadCoordinate:
            rejected.append(CandidateSolution(np.full(spec.dim, np.nan, dtype=complex), pair.value,
                                              pair.left_vector, reason="vanishing lead coordinate"))
            continue
        cand = identify(cand, spec, M, epsilon)
        if do_polish and not cand.accepted and cand.residuals and cand.max_residual < NEAR_MISS * cand.threshold:
            cand = identify(polish(cand, spec), spec, M, epsilon)
        elif do_polish and cand.accepted:
            cand = identify(polish(cand, spec), spec, M, epsilon)
        (accepted if cand.accepted else rejected).append(cand)
    accepted = dedupe(accepted)
    t["extract"] = time.perf_counter() - t0

    return SolveReport(
        accepted=accepted,
        rejected=rejected,
        p=bases.p,
        q=bases.q,
        p_i=bases.sizes,
        rank22=red.rank22,
        condition22=red.condition22,
        linear_residual=red.residual,
        K=K,
        epsilon=epsilon,
        n_eigenpairs=len(pairs),
        dropped_eigenpairs=bases.p - len(pairs),
        timings=t,
        matrix=M if keep_matrix else None,
        reduction=red if keep_matrix else None,
        eigenpairs=pairs if keep_matrix else [],
    )
