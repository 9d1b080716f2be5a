"""No-signalling polytope: exact LP, ranks and tightness certificates."""

from .linalg import affine_rank, exact_rank, modular_affine_rank, modular_rank
from .polytope import (
    collins_gisin_vector,
    is_tight,
    is_trivial,
    ns_maximum,
    ns_maximum_with_pivots,
    ns_minimum,
    ns_program,
    polytope_dimension,
)
from .simplex import LinearProgram, LPSolution, maximize, minimize

__all__ = [
    "LPSolution",
    "LinearProgram",
    "affine_rank",
    "collins_gisin_vector",
    "exact_rank",
    "is_tight",
    "is_trivial",
    "maximize",
    "minimize",
    "modular_affine_rank",
    "modular_rank",
    "ns_maximum",
    "ns_maximum_with_pivots",
    "ns_minimum",
    "ns_program",
    "polytope_dimension",
]
