"""Exact arithmetic for k-submodular functions on star domains.

Verifiers, brute-force and dual minimization with checkable certificates,
the k-submodular polyhedra, and k-matroid rank functions.
"""

from .domain import ROOT, BudgetExceeded, budget, enumerate_labelings, join_vec, meet_vec
from .dual import SignedVector, extract_minimizer, greedy_base, in_B_K, in_U, tight_family
from .formats import ParseError, format_function, parse_function, parse_sum, parse_table
from .functions import (
    ValuedFunction,
    brute_force_min,
    check_k_modular,
    check_k_submodular,
    check_k_supermodular,
    check_pairwise,
    gen_local,
    gen_rejection,
    gen_unary,
    normalize,
)
from .minmax import Certificate, Discrepancy, max_dual, max_dual_integer, verify_minmax
from .multimatroid import check_rank_axioms, gen_free_rank, rank_is_k_submodular
from .polyhedron import in_P, in_P_FT, verify_ft

__version__ = "0.1.0"

__all__ = [
    "ROOT", "BudgetExceeded", "budget", "enumerate_labelings", "join_vec", "meet_vec",
    "SignedVector", "extract_minimizer", "greedy_base", "in_B_K", "in_U", "tight_family",
    "ParseError", "format_function", "parse_function", "parse_sum", "parse_table",
    "ValuedFunction", "brute_force_min", "check_k_modular", "check_k_submodular",
    "check_k_supermodular", "check_pairwise", "gen_local", "gen_rejection", "gen_unary", "normalize",
    "Certificate", "Discrepancy", "max_dual", "max_dual_integer", "verify_minmax",
    "check_rank_axioms", "gen_free_rank", "rank_is_k_submodular",
    "in_P", "in_P_FT", "verify_ft",
]
