"""Domain/codomain annotations attached to an equation."""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

__all__ = ["DomainClass", "Codomain", "DomainSpec", "DOMAIN_FLAGS", "domain_from_flag"]


class DomainClass(str, Enum):
    Semigroup = "Semigroup"
    Monoid = "Monoid"
    Group = "Group"
    FieldAdditive = "FieldAdditive"
    FieldMultiplicativeNoZero = "FieldMultiplicativeNoZero"
    FieldWithZero = "FieldWithZero"
    RealLine = "RealLine"
    RealPositive = "RealPositive"
    RealNonzero = "RealNonzero"
    RealWithZero = "RealWithZero"
    RealNonneg = "RealNonneg"


class Codomain(str, Enum):
    GeneralField = "GeneralField"
    Complex = "Complex"
    Real = "Real"


ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"

_FIXED_OP = {
    DomainClass.FieldAdditive: ADDITIVE,
    DomainClass.RealLine: ADDITIVE,
    DomainClass.FieldMultiplicativeNoZero: MULTIPLICATIVE,
    DomainClass.FieldWithZero: MULTIPLICATIVE,
    DomainClass.RealPositive: MULTIPLICATIVE,
    DomainClass.RealNonzero: MULTIPLICATIVE,
    DomainClass.RealWithZero: MULTIPLICATIVE,
    DomainClass.RealNonneg: MULTIPLICATIVE,
}
_ABSTRACT = (DomainClass.Semigroup, DomainClass.Monoid, DomainClass.Group)
_WITH_ZERO = (DomainClass.FieldWithZero, DomainClass.RealWithZero, DomainClass.RealNonneg)
_REAL = (
    DomainClass.RealLine,
    DomainClass.RealPositive,
    DomainClass.RealNonzero,
    DomainClass.RealWithZero,
    DomainClass.RealNonneg,
)


@dataclass(frozen=True)
class DomainSpec:
    domain_class: DomainClass = DomainClass.Group
    group_op: Optional[str] = None
    codomain: Codomain = Codomain.Complex

    def __post_init__(self):
        object.__setattr__(self, "domain_class", DomainClass(self.domain_class))
        object.__setattr__(self, "codomain", Codomain(self.codomain))
        if self.group_op is not None and self.group_op not in (ADDITIVE, MULTIPLICATIVE):
            raise ValueError(f"group_op must be 'additive' or 'multiplicative', got {self.group_op!r}")
        fixed = _FIXED_OP.get(self.domain_class)
        if fixed is not None:
            if self.group_op is None:
                object.__setattr__(self, "group_op", fixed)
            elif self.group_op != fixed:
                raise ValueError(f"{self.domain_class.value} requires a {fixed} group operation")

    @property
    def op_symbol(self) -> Optional[str]:
        return None if self.group_op is None else ("+" if self.group_op == ADDITIVE else "*")

    @property
    def is_abstract(self) -> bool:
        return self.domain_class in _ABSTRACT

    @property
    def is_field_like(self) -> bool:
        """Domain carries both field operations (needed for mixed-operation shapes)."""
        return not self.is_abstract

    @property
    def embeds(self) -> bool:
        """Domain is a subset of the codomain field, so ``x`` itself is a codomain value."""
        return not self.is_abstract

    @property
    def has_zero(self) -> bool:
        """Multiplicative domain containing the absorbing element 0."""
        return self.domain_class in _WITH_ZERO

    @property
    def is_real(self) -> bool:
        return self.domain_class in _REAL

    @property
    def has_identity(self) -> bool:
        return self.domain_class != DomainClass.Semigroup

    @property
    def is_group(self) -> bool:
        return self.domain_class not in (DomainClass.Semigroup, DomainClass.Monoid) + _WITH_ZERO

    def with_op(self, op: str) -> "DomainSpec":
        return replace(self, group_op=op)

    def describe(self) -> str:
        op = self.group_op or "unspecified"
        return f"{self.domain_class.value} ({op}) -> {self.codomain.value}"


DOMAIN_FLAGS = {
    "semigroup": DomainClass.Semigroup,
    "monoid": DomainClass.Monoid,
    "group": DomainClass.Group,
    "field-additive": DomainClass.FieldAdditive,
    "field-nonzero": DomainClass.FieldMultiplicativeNoZero,
    "field-with-zero": DomainClass.FieldWithZero,
    "real": DomainClass.RealLine,
    "real-positive": DomainClass.RealPositive,
    "real-nonzero": DomainClass.RealNonzero,
    "real-with-zero": DomainClass.RealWithZero,
    "real-nonneg": DomainClass.RealNonneg,
}


def domain_from_flag(flag: str, codomain: str = "complex", op: Optional[str] = None) -> DomainSpec:
    """Build a DomainSpec from CLI-style names.

    ``field`` is resolved by the equation's group operation: the additive
    group of the field for ``+``, the multiplicative monoid (with zero) for ``*``.
    """
    cod = {"complex": Codomain.Complex, "real": Codomain.Real, "field": Codomain.GeneralField}[codomain]
    if flag == "field":
        cls = DomainClass.FieldWithZero if op == MULTIPLICATIVE else DomainClass.FieldAdditive
        return DomainSpec(cls, None, cod)
    if flag not in DOMAIN_FLAGS:
        raise ValueError(f"unknown domain {flag!r}")
    cls = DOMAIN_FLAGS[flag]
    return DomainSpec(cls, op if cls in _ABSTRACT else None, cod)
