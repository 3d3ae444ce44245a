"""Shape recognition against the canonical perturbed Cauchy-difference forms."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .ast import Apply, Equation, Expr, GroupArg, NamedConst, Prod, RationalConst, Sum, Var
from .domain import ADDITIVE, DomainSpec
from .parser import cauchy_op, parse_expr

__all__ = ["ShapeId", "classify", "canonical_form", "canonical_equation_text", "SHAPE_TEMPLATES", "CANONICAL_EQUATIONS"]


class ShapeId(str, Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    S6 = "S6"
    S7 = "S7"
    S8 = "S8"
    S9 = "S9"
    OpenProblemMixed = "OpenProblemMixed"
    Unrecognized = "Unrecognized"


# Templates are lhs - rhs with C the Cauchy operation and "alpha" a wildcard
# standing for any nonzero scalar (named constant or rational).
SHAPE_TEMPLATES = {
    ShapeId.S1: "f(xCy) - f(x) - f(y) - B(x,y)",
    ShapeId.S2: "f(x+y) - f(x) - f(y) - alpha*x*y",
    ShapeId.S3: "f(x*y) - f(x) - f(y) - alpha*x*y",
    ShapeId.S4: "f(xCy) - f(x) - f(y) - a(xCy)",
    ShapeId.S5: "f(x+y) - f(x) - f(y) - a(x*y)",
    ShapeId.S6: "f(xCy) - f(x) - f(y) - a(x)*a(y)",
    ShapeId.S7: "f(x*y) - f(x)*f(y) - a(x*y)",
    ShapeId.S8: "f(x+y) - f(x)*f(y) - a(x+y)",
    ShapeId.S9: "f(xCy) - f(x)*f(y) - a(x)*a(y)",
}
_MIXED = ("f(x+y) - f(x)*f(y) - a(x*y)", "f(x*y) - f(x)*f(y) - a(x+y)")

Atom = str
Monomial = Tuple[Atom, ...]
Poly = Dict[Monomial, Fraction]


def _atom(node: Expr, swap: bool) -> Atom:
    sw = {"x": "y", "y": "x"} if swap else {"x": "x", "y": "y"}
    if isinstance(node, Var):
        return sw[node.name]
    if isinstance(node, NamedConst):
        return "#" + node.name
    args = []
    for g in node.args:
        vs = sorted(sw[v] for v in g.vars)
        args.append(vs[0] if g.op is None else f"{vs[0]}{g.op}{vs[1]}")
    if node.func == "B":
        args.sort()
    return f"{node.func}({','.join(args)})"


def _poly(e: Expr, swap: bool = False) -> Poly:
    if isinstance(e, RationalConst):
        return {(): e.value} if e.value else {}
    if isinstance(e, (Var, NamedConst, Apply)):
        return {(_atom(e, swap),): Fraction(1)}
    if isinstance(e, Sum):
        out: Poly = {}
        for sign, t in e.terms:
            for m, c in _poly(t, swap).items():
                out[m] = out.get(m, 0) + sign * c
        return {m: c for m, c in out.items() if c}
    if isinstance(e, Prod):
        out = {(): Fraction(1)}
        for t in e.factors:
            q = _poly(t, swap)
            nxt: Poly = {}
            for m1, c1 in out.items():
                for m2, c2 in q.items():
                    m = tuple(sorted(m1 + m2))
                    nxt[m] = nxt.get(m, 0) + c1 * c2
            out = {m: c for m, c in nxt.items() if c}
        return out
    raise TypeError(f"not an expression node: {e!r}")


def canonical_form(eq: Equation, swap: bool = False) -> Poly:
    """lhs - rhs as a polynomial over atoms; independent of child order."""
    out = _poly(eq.lhs, swap)
    for m, c in _poly(eq.rhs, swap).items():
        out[m] = out.get(m, 0) - c
    return {m: c for m, c in out.items() if c}


def _template_poly(text: str, op: str) -> Poly:
    return _poly(parse_expr(text.replace("C", op)))


def _strip_consts(m: Monomial) -> Monomial:
    return tuple(a for a in m if not a.startswith("#"))


def _matches(p: Poly, template: Poly) -> bool:
    lead = [m for m in template if template[m] == 1 and m and m[0].startswith("f(") and ("+" in m[0] or "*" in m[0])]
    if len(lead) != 1 or lead[0] not in p:
        return False
    scale = 1 / p[lead[0]]
    q = {m: c * scale for m, c in p.items()}
    wild = [m for m in template if "#alpha" in m]
    for m, c in template.items():
        if m in wild:
            continue
        if q.pop(m, None) != c:
            return False
    for m in wild:
        core = _strip_consts(m)
        hits = [k for k in q if _strip_consts(k) == core]
        if len(hits) != 1:
            return False
        q.pop(hits[0])
    return not q


def classify(eq: Equation) -> ShapeId:
    """Total map from well-formed equations to the shape taxonomy."""
    if "f" not in eq.unknowns:
        return ShapeId.Unrecognized
    op = cauchy_op(eq.lhs, eq.rhs)
    if op is None:
        return ShapeId.Unrecognized
    dom: DomainSpec = eq.domain
    polys = [canonical_form(eq), canonical_form(eq, swap=True)]

    for t in _MIXED:
        tp = _template_poly(t, "+")
        if any(_matches(p, tp) for p in polys):
            return ShapeId.OpenProblemMixed

    if dom.group_op is not None and op != dom.group_op:
        return ShapeId.Unrecognized
    sym = "+" if op == ADDITIVE else "*"
    for shape, text in SHAPE_TEMPLATES.items():
        tp = _template_poly(text, sym)
        if not any(_matches(p, tp) for p in polys):
            continue
        if shape in (ShapeId.S2, ShapeId.S3) and not dom.embeds:
            continue
        if shape == ShapeId.S5 and not dom.is_field_like:
            continue
        return shape
    return ShapeId.Unrecognized


CANONICAL_EQUATIONS = {
    ShapeId.S1: "f(xCy) - f(x) - f(y) = B(x,y)",
    ShapeId.S2: "f(x+y) - f(x) - f(y) = alpha*x*y",
    ShapeId.S3: "f(x*y) - f(x) - f(y) = alpha*x*y",
    ShapeId.S4: "f(xCy) - f(x) - f(y) = a(xCy)",
    ShapeId.S5: "f(x+y) - f(x) - f(y) = a(x*y)",
    ShapeId.S6: "f(xCy) - f(x) - f(y) = a(x)*a(y)",
    ShapeId.S7: "f(x*y) - f(x)*f(y) = a(x*y)",
    ShapeId.S8: "f(x+y) - f(x)*f(y) = a(x+y)",
    ShapeId.S9: "f(xCy) - f(x)*f(y) = a(x)*a(y)",
}


def canonical_equation_text(shape: ShapeId, op_symbol: str) -> str:
    return CANONICAL_EQUATIONS[ShapeId(shape)].replace("C", op_symbol)
