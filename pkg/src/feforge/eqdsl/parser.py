"""Recursive-descent parser and canonical printer for the equation language.

Grammar (whitespace-insensitive)::

    equation := expr "=" expr
    expr     := ["+"|"-"] term { ("+"|"-") term }
    term     := factor { "*" factor }
    factor   := apply | var | number | ident | "(" expr ")"
    apply    := ident "(" garg { "," garg } ")"
    garg     := var [ ("+"|"*") var ]
    number   := integer [ "/" integer ]

Inside an application ``+``/``*`` are the domain's group operation; outside
they are codomain arithmetic.  Error offsets are 1-based character columns.
"""
from __future__ import annotations

import re
from dataclasses import replace
from fractions import Fraction
from typing import List, Optional, Tuple

from .ast import ARITY, FUNCTIONS, Apply, Equation, Expr, GroupArg, NamedConst, Prod, RationalConst, Sum, Var
from .domain import ADDITIVE, MULTIPLICATIVE, DomainSpec

__all__ = [
    "ParseError",
    "ArityError",
    "MixedOperationError",
    "parse",
    "parse_expr",
    "render",
    "render_expr",
    "MAX_DEPTH",
]

MAX_DEPTH = 16
VARIABLES = ("x", "y")
_ALIASES = {"alpha": "a", "a": "a", "f": "f", "B": "B"}


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.message = message
        self.position = position


class ArityError(ParseError):
    pass


class MixedOperationError(ParseError):
    pass


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z]+)|(?P<sym>[-+*/=(),]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad + 1)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start + 1))
        pos = m.end()
    tokens.append(("eof", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.depth = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, sym: str):
        kind, val, pos = self.peek()
        if val != sym or kind == "eof":
            what = "end of input" if kind == "eof" else repr(val)
            raise ParseError(f"expected {sym!r}, found {what}", pos)
        return self.take()

    def equation(self) -> Tuple[Expr, Expr]:
        lhs = self.expr()
        self.expect("=")
        rhs = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {val!r}", pos)
        return lhs, rhs

    def expr(self) -> Expr:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError(f"expression nested deeper than {MAX_DEPTH}", self.peek()[2])
        terms = []
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "sym":
            sign = -1 if self.take()[1] == "-" else 1
        terms.append((sign, self.term()))
        while self.peek()[0] == "sym" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            terms.append((sign, self.term()))
        self.depth -= 1
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.peek()[1] == "*" and self.peek()[0] == "sym":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def factor(self) -> Expr:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            num = int(val)
            if self.peek()[1] == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num":
                    raise ParseError("expected integer denominator", p2)
                if int(v2) == 0:
                    raise ParseError("zero denominator", p2)
                return RationalConst(Fraction(num, int(v2)))
            return RationalConst(Fraction(num))
        if kind == "name":
            self.take()
            if self.peek()[1] == "(" and self.peek()[0] == "sym":
                return self.apply(val, pos)
            if val in VARIABLES:
                return Var(val)
            if val in ("f", "a", "B"):
                raise ArityError(f"function {val!r} used without arguments", pos)
            return NamedConst(val)
        if val == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        what = "end of input" if kind == "eof" else repr(val)
        raise ParseError(f"unexpected {what}", pos)

    def apply(self, name: str, pos: int) -> Apply:
        func = _ALIASES.get(name)
        if func is None:
            raise ParseError(f"unknown function symbol {name!r}", pos)
        self.expect("(")
        args = [self.garg()]
        while self.peek()[1] == "," and self.peek()[0] == "sym":
            self.take()
            args.append(self.garg())
        self.expect(")")
        if len(args) != ARITY[func]:
            raise ArityError(f"{name} takes {ARITY[func]} argument(s), got {len(args)}", pos)
        return Apply(func, tuple(args))

    def garg(self) -> GroupArg:
        kind, val, pos = self.take()
        if kind != "name" or val not in VARIABLES:
            what = "end of input" if kind == "eof" else repr(val)
            raise ParseError(f"expected variable x or y, found {what}", pos)
        nxt = self.peek()
        if nxt[0] == "sym" and nxt[1] in ("+", "*"):
            op = self.take()[1]
            k2, v2, p2 = self.take()
            if k2 != "name" or v2 not in VARIABLES:
                what = "end of input" if k2 == "eof" else repr(v2)
                raise ParseError(f"expected variable x or y, found {what}", p2)
            after = self.peek()
            if after[0] == "sym" and after[1] in ("+", "*", "-", "/"):
                if after[1] != op and after[1] in "+*":
                    raise MixedOperationError("mixed group operations inside one argument", after[2])
                raise ParseError("a function argument combines at most two variables", after[2])
            return GroupArg((val, v2), op)
        return GroupArg((val,), None)


def _walk(e: Expr):
    yield e
    if isinstance(e, Sum):
        for _, t in e.terms:
            yield from _walk(t)
    elif isinstance(e, Prod):
        for t in e.factors:
            yield from _walk(t)


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.expr()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {val!r}", pos)
    return e


def cauchy_op(lhs: Expr, rhs: Expr) -> Optional[str]:
    """Group operation used inside f's composite argument, if any."""
    for side in (lhs, rhs):
        for node in _walk(side):
            if isinstance(node, Apply) and node.func == "f":
                for g in node.args:
                    if g.op is not None:
                        return ADDITIVE if g.op == "+" else MULTIPLICATIVE
    return None


def parse(text: str, domain: Optional[DomainSpec] = None) -> Equation:
    """Parse ``text`` into an :class:`Equation`.

    For abstract domains without a fixed group operation, the operation is
    read off the unknown f's composite argument.
    """
    domain = domain or DomainSpec()
    lhs, rhs = _Parser(text).equation()
    names_applied, names_bare = set(), set()
    for side in (lhs, rhs):
        for node in _walk(side):
            if isinstance(node, Apply):
                names_applied.add(node.func)
            elif isinstance(node, NamedConst):
                names_bare.add(node.name)
    clash = {n for n in names_bare if _ALIASES.get(n) in names_applied and n != "alpha"}
    if clash:
        raise ParseError(f"{sorted(clash)[0]!r} used both as a function and as a constant", 1)
    if domain.group_op is None:
        op = cauchy_op(lhs, rhs)
        if op is not None:
            domain = domain.with_op(op)
    unknowns = frozenset(n for n in names_applied if n in ("f", "a"))
    knowns = frozenset(({"B"} & names_applied) | names_bare)
    return Equation(lhs, rhs, domain, knowns, unknowns)


def _render_arg(g: GroupArg) -> str:
    return g.vars[0] if g.op is None else f"{g.vars[0]}{g.op}{g.vars[1]}"


def render_expr(e: Expr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, NamedConst):
        return e.name
    if isinstance(e, RationalConst):
        return str(e.value)
    if isinstance(e, Apply):
        return f"{e.func}({','.join(_render_arg(g) for g in e.args)})"
    if isinstance(e, Prod):
        return "*".join(f"({render_expr(t)})" if isinstance(t, (Sum, Prod)) else render_expr(t) for t in e.factors)
    if isinstance(e, Sum):
        out = ""
        for k, (sign, t) in enumerate(e.terms):
            s = f"({render_expr(t)})" if isinstance(t, Sum) else render_expr(t)
            if k == 0:
                out = s if sign == 1 else "-" + s
            else:
                out += (" + " if sign == 1 else " - ") + s
        return out
    raise TypeError(f"not an expression node: {e!r}")


def render(eq: Equation) -> str:
    """Canonical text; ``parse(render(eq))`` rebuilds the same tree."""
    return f"{render_expr(eq.lhs)} = {render_expr(eq.rhs)}"
