"""Symbolic residual lhs - rhs of an equation under an ExpPoly assignment."""
from __future__ import annotations

from typing import Mapping, Optional

from ..eqdsl.ast import Apply, Equation, Expr, NamedConst, Prod, RationalConst, Sum, Var
from ..eqdsl.domain import DomainSpec
from .poly import EMBEDDING, ExpPoly, ExpPolyError, NotRepresentable, SymbolTable, apply_field_product, apply_words

__all__ = ["residual", "table_for", "UnassignedError"]


class UnassignedError(ExpPolyError):
    pass


def table_for(domain: DomainSpec, **kwargs) -> SymbolTable:
    """Default symbol table for a domain; field-like domains get the embedding ``id``."""
    embedding = None
    if domain.embeds:
        embedding = "additive" if domain.group_op == "additive" else "exponential"
    return SymbolTable(embedding=embedding, **kwargs)


def _apply(node: Apply, poly: ExpPoly, domain: DomainSpec) -> ExpPoly:
    (g,) = node.args
    if g.op is None:
        return poly.at(g.vars[0])
    u, v = g.vars
    if domain.op_symbol is None or g.op == domain.op_symbol:
        return apply_words(poly, {"x": (u, v)})
    if g.op == "*" and domain.group_op == "additive" and domain.is_field_like:
        return apply_field_product(poly, u, v)
    raise NotRepresentable(f"{node.func}({u}{g.op}{v}) has no formal expansion on {domain.describe()}")


def residual(
    eq: Equation,
    assign: Mapping[str, ExpPoly],
    knowns: Optional[Mapping[str, object]] = None,
) -> ExpPoly:
    """Expand lhs - rhs in the x/y copies of every symbol.

    ``assign`` maps ``f`` and ``a`` (alias ``alpha``) to one-variable
    polynomials written in ``x``.  ``knowns`` supplies named scalars and
    optionally ``B`` as a two-variable polynomial in ``x, y``; by default
    ``B`` is the formal biadditive symbol.  The result is zero exactly when
    the assignment solves the equation for every instantiation of the symbols.
    """
    assign = dict(assign)
    if "alpha" in assign and "a" not in assign:
        assign["a"] = assign.pop("alpha")
    knowns = dict(knowns or {})
    missing = sorted(u for u in eq.unknowns if u not in assign)
    if missing:
        raise UnassignedError(f"unassigned unknown(s): {', '.join(missing)}")
    tables = {p.table for p in assign.values()}
    if len(tables) != 1:
        raise ExpPolyError("assigned polynomials must share one symbol table")
    (table,) = tables

    def walk(e: Expr) -> ExpPoly:
        if isinstance(e, RationalConst):
            return ExpPoly.const(table, e.value)
        if isinstance(e, NamedConst):
            if e.name not in knowns:
                raise UnassignedError(f"no value for constant {e.name!r}")
            return ExpPoly.const(table, knowns[e.name])
        if isinstance(e, Var):
            if table.embedding is None:
                raise NotRepresentable(f"variable {e.name} used as a value but the domain is not embedded")
            return ExpPoly.symbol(table, EMBEDDING, (e.name,))
        if isinstance(e, Apply):
            if e.func == "B":
                u, v = e.args[0].vars[0], e.args[1].vars[0]
                if any(g.op is not None for g in e.args):
                    raise NotRepresentable("B is only applied to bare variables")
                given = knowns.get("B")
                if given is None:
                    return ExpPoly.symbol(table, "B", (u, v))
                return given.rename_variables({"x": u, "y": v})
            return _apply(e, assign[e.func], eq.domain)
        if isinstance(e, Sum):
            out = ExpPoly.zero(table)
            for sign, t in e.terms:
                out = out + walk(t) if sign == 1 else out - walk(t)
            return out
        if isinstance(e, Prod):
            out = ExpPoly.one(table)
            for t in e.factors:
                out = out * walk(t)
            return out
        raise TypeError(f"not an expression node: {e!r}")

    return walk(eq.lhs) - walk(eq.rhs)
