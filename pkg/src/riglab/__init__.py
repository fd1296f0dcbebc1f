"""Exact computations for matrix rigidity over small fields of definition."""

from .cyclo import (
    RootOfUnityMatrix,
    bound_report,
    certify_nonzero,
    delta_thm7,
    delta_thm17,
    dfgs_bound,
    exact_is_zero,
)
from .detideals import (
    Pattern,
    crosscheck_prop14,
    elimination_ideal_direct,
    elimination_ideal_reduced,
    rigidity_ideal,
)
from .errors import ArgumentError, PatternError, RegistryError, ResourceExceeded, RiglabError
from .exactla import RationalMatrix, bareiss_det, bareiss_rank, dimension_witness, jacobian_rank_at
from .groebner import Caps, Ideal, buchberger, eliminate, normal_form
from .polyring import GREVLEX, LEX, Polynomial, VarRegistry, block_order, parse_polynomial
from .rigidity import closure_member, max_rigidity_certificate, paper_families, pattern_solvable, rig_exact

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "Caps", "GREVLEX", "Ideal", "LEX", "Pattern", "PatternError", "Polynomial",
    "RationalMatrix", "RegistryError", "ResourceExceeded", "RiglabError", "RootOfUnityMatrix",
    "VarRegistry", "bareiss_det", "bareiss_rank", "block_order", "bound_report", "buchberger",
    "certify_nonzero", "closure_member", "crosscheck_prop14", "delta_thm7", "delta_thm17",
    "dfgs_bound", "dimension_witness", "eliminate", "elimination_ideal_direct",
    "elimination_ideal_reduced", "exact_is_zero", "jacobian_rank_at", "max_rigidity_certificate",
    "normal_form", "paper_families", "parse_polynomial", "pattern_solvable", "rig_exact",
    "rigidity_ideal",
]
