"""Exact polynomial arithmetic and degree-wise graded linear algebra."""

from .graded import (
    GradedIdeal,
    HilbertTable,
    NormalForm,
    SliceComparison,
    divide_by_variable,
    hilbert_function,
    ideal_slices_equal,
    monomial_budget,
    normal_form,
)
from .linalg import SparseEchelon, rank, row_reduce
from .polynomial import Polynomial, PolyRing, prod, weighted_monomials

__all__ = [
    "GradedIdeal",
    "HilbertTable",
    "NormalForm",
    "Polynomial",
    "PolyRing",
    "SliceComparison",
    "SparseEchelon",
    "divide_by_variable",
    "hilbert_function",
    "ideal_slices_equal",
    "monomial_budget",
    "normal_form",
    "prod",
    "rank",
    "row_reduce",
    "weighted_monomials",
]
