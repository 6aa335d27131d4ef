"""Sparse multivariate polynomials and rational functions over Q."""
from .algorithms import (
    SturmChain,
    poly_gcd,
    poly_lcm,
    resultant,
    squarefree,
    squarefree_part,
    sturm_sequence,
    subresultant_coeffs,
    subresultants,
    sylvester_resultant,
)
from .interval_eval import eval_centered, eval_interval, sign_on_box
from .kernels import BACKEND
from .parse import parse_expr, parse_poly
from .poly import MPoly, format_poly, merge_vars, poly_arith, variables
from .ratfunc import RatFunc

__all__ = [
    "BACKEND",
    "MPoly",
    "RatFunc",
    "SturmChain",
    "eval_centered",
    "eval_interval",
    "format_poly",
    "merge_vars",
    "parse_expr",
    "parse_poly",
    "poly_arith",
    "poly_gcd",
    "poly_lcm",
    "resultant",
    "sign_on_box",
    "squarefree",
    "squarefree_part",
    "sturm_sequence",
    "subresultant_coeffs",
    "subresultants",
    "sylvester_resultant",
    "variables",
]
