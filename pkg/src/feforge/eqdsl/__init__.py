"""Equation language: parsing, canonical rendering and shape classification."""
from .ast import Apply, Equation, Expr, GroupArg, NamedConst, Prod, RationalConst, Sum, Var
from .classify import ShapeId, canonical_form, classify
from .domain import Codomain, DomainClass, DomainSpec, domain_from_flag
from .parser import ArityError, MixedOperationError, ParseError, parse, parse_expr, render, render_expr

__all__ = [
    "Apply",
    "Equation",
    "Expr",
    "GroupArg",
    "NamedConst",
    "Prod",
    "RationalConst",
    "Sum",
    "Var",
    "ShapeId",
    "canonical_form",
    "classify",
    "Codomain",
    "DomainClass",
    "DomainSpec",
    "domain_from_flag",
    "ArityError",
    "MixedOperationError",
    "ParseError",
    "parse",
    "parse_expr",
    "render",
    "render_expr",
]
