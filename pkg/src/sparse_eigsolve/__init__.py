"""Sparse Laurent-polynomial system solver based on reduced multiplication matrices.

The pipeline builds lattice-point bases from Newton polytopes, assembles the
matrix of ``(g0, ..., gk) -> f0*g0 + sum fi*gi``, eliminates its lower block
and reads the solutions off the left eigenvectors of the reduced matrix.
"""

from .adapters import (
    Tensor3,
    TrilinearMax,
    TrilinearSpec,
    critical_point_system,
    dense_system,
    lagrange_system,
    singular_triple_count,
    trilinear_max,
    trilinear_system,
)
from .assembly import (
    BasisPair,
    ResultantMatrix,
    SystemSpec,
    assemble,
    block_split,
    build_bases,
    normalize_spec,
)
from .eigensolver import EigenPair, SchurReduction, left_eigen, reduced_matrix, schur_reduce, solve_F
from .errors import (
    BasisBudgetExceeded,
    CoordinateUnrecoverable,
    DimensionMismatch,
    MultiplicityWarning,
    NoAcceptedSolutions,
    RankDeficient,
    VanishingLeadCoordinate,
)
from .extractor import (
    CandidateSolution,
    ExtractionPlan,
    build_extraction_plan,
    dedupe,
    extract,
    identify,
    polish,
)
from .lattice import (
    MonomialBasis,
    Polytope,
    convex_hull,
    dilate,
    is_normal,
    lattice_points,
    minkowski_sum,
    mixed_volume,
    volume,
)
from .laurent import LaurentPoly, newton_polytope, random_generic, shift_to_origin
from .pipeline import SolveReport, solve

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
