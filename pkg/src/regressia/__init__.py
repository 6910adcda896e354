"""Finite combinatorics of regressive values and decreasing function assignments."""

__version__ = "0.1.0"

from .core import (Caps, DEFAULT_CAPS, Verdict, closure, is_closed, min_homogeneous_check, order_type,
                   ot, ot_surjection_sum, ramsey_homogeneous, regressive_values)
from .assignments import (FunctionAssignment, check_end_preserving, check_sharp_decreasing,
                          check_star_decreasing, lex_lift, ramsey_reduce)
from .bef import eval_bef, parse_bef
from .inductive import df, dfnl_from_bef, lemma_5_2_assignment, mrcn, rcn
from .report import SearchBudget, SearchReport

__all__ = [
    "Caps", "DEFAULT_CAPS", "Verdict", "closure", "is_closed", "min_homogeneous_check", "order_type",
    "ot", "ot_surjection_sum", "ramsey_homogeneous", "regressive_values", "FunctionAssignment",
    "check_end_preserving", "check_sharp_decreasing", "check_star_decreasing", "lex_lift",
    "ramsey_reduce", "eval_bef", "parse_bef", "df", "dfnl_from_bef", "lemma_5_2_assignment", "mrcn",
    "rcn", "SearchBudget", "SearchReport",
]
