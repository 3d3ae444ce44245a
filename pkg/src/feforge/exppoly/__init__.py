"""Exact exponential-polynomial arithmetic over Q(i)."""
from .scalar import GaussianRational, as_scalar, gaussian_sqrt, rational_sqrt
from .poly import (
    MAX_DEGREE,
    DegreeBoundError,
    ExpPoly,
    ExpPolyError,
    InverseNotRepresentable,
    NotRepresentable,
    SymbolTable,
    SymbolTableMismatch,
    add_poly,
    apply_field_product,
    apply_words,
    expand_on_product,
    mul_poly,
    parse_exppoly,
)
from .linalg import linearly_independent, matrix_rank, rank
from .residual import UnassignedError, residual, table_for

__all__ = [
    "GaussianRational",
    "as_scalar",
    "gaussian_sqrt",
    "rational_sqrt",
    "MAX_DEGREE",
    "DegreeBoundError",
    "ExpPoly",
    "ExpPolyError",
    "InverseNotRepresentable",
    "NotRepresentable",
    "SymbolTable",
    "SymbolTableMismatch",
    "add_poly",
    "apply_field_product",
    "apply_words",
    "expand_on_product",
    "mul_poly",
    "parse_exppoly",
    "linearly_independent",
    "matrix_rank",
    "rank",
    "UnassignedError",
    "residual",
    "table_for",
]
