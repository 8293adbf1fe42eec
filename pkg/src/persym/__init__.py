"""Rank enumeration of n-times persymmetric matrices over GF(2)."""

from .census import RankDistribution, augment_row, rank_census
from .errors import CapacityError, FormulaError, ShapeError
from .formulas import (
    conjectured_distribution,
    gamma_conjectured,
    gamma_conjectured_alt,
    gamma_k_minus_1,
    rq_closed,
    rq_explicit_k2,
    special_case_density,
)
from .gf2 import BitMatrix, PolyGF2, poly_mul, rank
from .laurent import (
    TruncatedLaurent,
    char_E,
    char_E_poly_pair,
    char_psi,
    coset_integral,
    exp_sum_f,
)
from .model import CoeffAssignment, Shape, assignment_from_laurent, build_block, build_matrix
from .solutions import SolutionSystem, count_solutions

__version__ = "0.1.0"
