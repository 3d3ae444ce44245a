"""Immutable syntax tree for two-variable functional equations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Optional, Tuple, Union

from .domain import DomainSpec

__all__ = [
    "Var",
    "GroupArg",
    "Apply",
    "NamedConst",
    "RationalConst",
    "Sum",
    "Prod",
    "Expr",
    "Equation",
    "FUNCTIONS",
    "UNKNOWNS",
    "ARITY",
]

UNKNOWNS = ("f", "a")
FUNCTIONS = ("f", "a", "B")
ARITY = {"f": 1, "a": 1, "B": 2}


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class GroupArg:
    """Variables combined by one group operation, e.g. ``x*y``; ``op`` is None for a bare variable."""

    vars: Tuple[str, ...]
    op: Optional[str] = None


@dataclass(frozen=True)
class Apply:
    func: str
    args: Tuple[GroupArg, ...]


@dataclass(frozen=True)
class NamedConst:
    name: str


@dataclass(frozen=True)
class RationalConst:
    value: Fraction


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Tuple[int, "Expr"], ...]


@dataclass(frozen=True)
class Prod:
    factors: Tuple["Expr", ...]


Expr = Union[Var, Apply, NamedConst, RationalConst, Sum, Prod]


@dataclass(frozen=True)
class Equation:
    lhs: Expr
    rhs: Expr
    domain: DomainSpec
    knowns: FrozenSet[str] = field(default_factory=frozenset)
    unknowns: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if not set(self.unknowns) <= set(UNKNOWNS):
            raise ValueError(f"unknowns must be a subset of {UNKNOWNS}")
        if set(self.knowns) & set(self.unknowns):
            raise ValueError("a symbol cannot be both known and unknown")
