"""Sparse exponential polynomials over formal additive and exponential symbols.

A monomial is a sorted tuple of factors ``(name, args, exponent)``; ``args``
lists the variable copies the symbol is evaluated at (``("x",)`` for a
one-variable symbol, ``("x", "y")`` for a biadditive one).  The empty tuple
is the constant monomial, i.e. the identically-one exponential.

Coefficients are exact :class:`GaussianRational` values.  Solution-family
templates reuse the same class with sympy expressions in the family
parameters as coefficients; arithmetic between the two kinds promotes to
sympy.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

import sympy

from .scalar import GaussianRational, as_scalar

__all__ = [
    "SymbolTable",
    "ExpPoly",
    "Monomial",
    "ExpPolyError",
    "SymbolTableMismatch",
    "DegreeBoundError",
    "InverseNotRepresentable",
    "NotRepresentable",
    "MAX_DEGREE",
    "add_poly",
    "mul_poly",
    "expand_on_product",
    "apply_words",
    "apply_field_product",
    "parse_exppoly",
]

MAX_DEGREE = 8
EMBEDDING = "id"

Factor = Tuple[str, Tuple[str, ...], int]
Monomial = Tuple[Factor, ...]


class ExpPolyError(ValueError):
    pass


class SymbolTableMismatch(ExpPolyError):
    pass


class DegreeBoundError(ExpPolyError):
    pass


class InverseNotRepresentable(ExpPolyError):
    pass


class NotRepresentable(ExpPolyError):
    pass


@dataclass(frozen=True)
class SymbolTable:
    """Formal symbols available to a family of exponential polynomials.

    ``embedding`` is set when the domain sits inside the codomain field; the
    symbol ``id`` then stands for the inclusion map, which is additive for an
    additively written domain and exponential for a multiplicative one.
    Every additive symbol ``a`` also owns the biadditive symbol ``a*``,
    ``a*(x, y) = a(x*y)`` for the field product of a field domain.
    """

    additive: Tuple[str, ...] = ("a1", "a2")
    exponential: Tuple[str, ...] = ("m1", "m2")
    biadditive: Tuple[str, ...] = ("B",)
    embedding: Optional[str] = None

    def __post_init__(self):
        if self.embedding not in (None, "additive", "exponential"):
            raise ValueError(f"bad embedding kind {self.embedding!r}")
        names = list(self.additive) + list(self.exponential) + list(self.biadditive)
        if len(set(names)) != len(names) or EMBEDDING in names:
            raise ValueError("symbol names must be unique and must not shadow 'id'")

    def kind(self, name: str) -> str:
        """Return 'add', 'exp' or 'bi' for a known symbol name."""
        if name in self.additive:
            return "add"
        if name in self.exponential:
            return "exp"
        if name in self.biadditive:
            return "bi"
        if name.endswith("*") and name[:-1] in self.additive:
            return "bi"
        if name == EMBEDDING and self.embedding is not None:
            return "add" if self.embedding == "additive" else "exp"
        raise ExpPolyError(f"symbol {name!r} is not in the symbol table")


def _is_sym(c) -> bool:
    return isinstance(c, sympy.Basic)


def _coef(c):
    if _is_sym(c):
        return sympy.expand(c)
    return as_scalar(c)


def _to_sym(c):
    return c if _is_sym(c) else sympy.sympify(c)


def _cadd(a, b):
    if _is_sym(a) or _is_sym(b):
        return sympy.expand(_to_sym(a) + _to_sym(b))
    return a + b


def _cmul(a, b):
    if _is_sym(a) or _is_sym(b):
        return sympy.expand(_to_sym(a) * _to_sym(b))
    return a * b


def _czero(c) -> bool:
    return c == 0


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    acc: Dict[Tuple[str, Tuple[str, ...]], int] = {}
    for name, args, e in m1 + m2:
        acc[(name, args)] = acc.get((name, args), 0) + e
    return tuple(sorted((n, a, e) for (n, a), e in acc.items()))


class ExpPoly:
    """Immutable finite map monomial -> coefficient, zero coefficients dropped."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: SymbolTable, terms: Optional[Mapping[Monomial, object]] = None):
        self.table = table
        clean: Dict[Monomial, object] = {}
        for mono, c in (terms or {}).items():
            c = _coef(c)
            if _czero(c):
                continue
            _check_degree(table, mono)
            clean[mono] = c
        self._terms = clean
        self._hash = None

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, table: SymbolTable) -> "ExpPoly":
        return cls(table)

    @classmethod
    def const(cls, table: SymbolTable, c) -> "ExpPoly":
        return cls(table, {(): c})

    @classmethod
    def one(cls, table: SymbolTable) -> "ExpPoly":
        return cls.const(table, 1)

    @classmethod
    def symbol(cls, table: SymbolTable, name: str, args=("x",), power: int = 1) -> "ExpPoly":
        if isinstance(args, str):
            args = (args,)
        args = tuple(args)
        kind = table.kind(name)
        if power < 0:
            if kind == "exp":
                raise InverseNotRepresentable(f"{name}^{power}: exponential inverses are not representable")
            raise NotRepresentable(f"negative power of {name}")
        if kind == "bi":
            if len(args) != 2:
                raise ExpPolyError(f"biadditive symbol {name} needs two arguments")
            args = tuple(sorted(args))
        elif len(args) != 1:
            raise ExpPolyError(f"symbol {name} takes one argument")
        if power == 0:
            return cls.one(table)
        return cls(table, {((name, args, power),): 1})

    # inspection -------------------------------------------------------------

    def items(self):
        """(monomial, coefficient) pairs in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def monomials(self):
        return sorted(self._terms)

    def coefficient(self, mono: Monomial):
        return self._terms.get(mono, GaussianRational(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def variables(self) -> set:
        return {v for mono in self._terms for _, args, _ in mono for v in args}

    def symbols(self) -> set:
        return {name for mono in self._terms for name, _, _ in mono}

    def is_symbolic(self) -> bool:
        return any(_is_sym(c) for c in self._terms.values())

    def degree(self) -> int:
        return max((_additive_degree(self.table, m) for m in self._terms), default=0)

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "ExpPoly"):
        if self.table != other.table:
            raise SymbolTableMismatch("exponential polynomials use different symbol tables")

    def _lift(self, other) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            self._check(other)
            return other
        return ExpPoly.const(self.table, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = _cadd(out[mono], c) if mono in out else c
        return ExpPoly(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly(self.table, {m: _cmul(c, -1) for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            c = _coef(other)
            return ExpPoly(self.table, {m: _cmul(v, c) for m, v in self._terms.items()})
        self._check(other)
        out: Dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                _check_degree(self.table, mono)
                c = _cmul(c1, c2)
                out[mono] = _cadd(out[mono], c) if mono in out else c
        return ExpPoly(self.table, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise InverseNotRepresentable("negative powers of exponential polynomials are not representable")
        out = ExpPoly.one(self.table)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == ExpPoly.const(self.table, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset((m, str(c)) for m, c in self._terms.items())))
        return self._hash

    # transformations --------------------------------------------------------

    def map_coefficients(self, fn) -> "ExpPoly":
        return ExpPoly(self.table, {m: fn(c) for m, c in self._terms.items()})

    def rename_variables(self, mapping: Mapping[str, str]) -> "ExpPoly":
        """Rename variable copies, e.g. ``{"x": "y"}``."""
        out: Dict[Monomial, object] = {}
        for mono, c in self._terms.items():
            factors = []
            for name, args, e in mono:
                new = tuple(mapping.get(v, v) for v in args)
                if len(new) == 2:
                    new = tuple(sorted(new))
                factors.append((name, new, e))
            m = _merge(factors)
            out[m] = _cadd(out[m], c) if m in out else c
        return ExpPoly(self.table, out)

    def at(self, var: str) -> "ExpPoly":
        """The one-variable polynomial (written in ``x``) evaluated at ``var``."""
        return self.rename_variables({"x": var})

    def substitute_symbols(self, mapping: Mapping[str, str], table: Optional[SymbolTable] = None) -> "ExpPoly":
        """Rename symbols; an exponential may also be sent to ``"1"`` or ``"0"``."""
        table = table or self.table
        out: Dict[Monomial, object] = {}
        for mono, c in self._terms.items():
            factors = []
            dead = False
            for name, args, e in mono:
                target = mapping.get(name, name)
                if name.endswith("*") and name[:-1] in mapping:
                    target = mapping[name[:-1]] + "*"
                if target == "1":
                    continue
                if target == "0":
                    dead = True
                    break
                table.kind(target)
                factors.append((target, args, e))
            if dead:
                continue
            m = _merge(factors)
            out[m] = _cadd(out[m], c) if m in out else c
        return ExpPoly(table, out)

    def with_table(self, table: SymbolTable) -> "ExpPoly":
        return self.substitute_symbols({}, table)

    # printing ---------------------------------------------------------------

    def dump(self) -> str:
        """Canonical text form: monomials sorted, deterministic coefficients."""
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            parts.append(_term_str(mono, c))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __str__ = dump

    def __repr__(self):
        return f"ExpPoly({self.dump()})"


def _merge(factors) -> Monomial:
    acc: Dict[Tuple[str, Tuple[str, ...]], int] = {}
    for name, args, e in factors:
        acc[(name, args)] = acc.get((name, args), 0) + e
    return tuple(sorted((n, a, e) for (n, a), e in acc.items()))


def _additive_degree(table: SymbolTable, mono: Monomial) -> int:
    return sum(e for name, _, e in mono if table.kind(name) != "exp")


def _check_degree(table: SymbolTable, mono: Monomial):
    if _additive_degree(table, mono) > MAX_DEGREE:
        raise DegreeBoundError(f"total degree exceeds {MAX_DEGREE}")
    for name, _, e in mono:
        if e > MAX_DEGREE:
            raise DegreeBoundError(f"exponent of {name} exceeds {MAX_DEGREE}")


def _mono_str(mono: Monomial) -> str:
    out = []
    for name, args, e in mono:
        s = f"{name}({','.join(args)})"
        out.append(s if e == 1 else f"{s}^{e}")
    return "*".join(out)


def _coef_str(c) -> str:
    if _is_sym(c):
        return f"({sympy.sstr(c)})"
    s = str(c)
    if c.im != 0 and c.re != 0:
        return f"({s})"
    return s


def _term_str(mono: Monomial, c) -> str:
    if not mono:
        return _coef_str(c)
    m = _mono_str(mono)
    if not _is_sym(c):
        if c == 1:
            return m
        if c == -1:
            return "-" + m
    return f"{_coef_str(c)}*{m}"


# module-level operations ----------------------------------------------------------


def add_poly(p: ExpPoly, q: ExpPoly) -> ExpPoly:
    if p.table != q.table:
        raise SymbolTableMismatch("exponential polynomials use different symbol tables")
    return p + q


def mul_poly(p: ExpPoly, q: ExpPoly) -> ExpPoly:
    if p.table != q.table:
        raise SymbolTableMismatch("exponential polynomials use different symbol tables")
    return p * q


def _factor_at_words(table: SymbolTable, name: str, args, e: int, words) -> ExpPoly:
    kind = table.kind(name)
    if kind == "bi":
        left, right = (words.get(args[0], (args[0],)), words.get(args[1], (args[1],)))
        base = ExpPoly.zero(table)
        for u in left:
            for v in right:
                base = base + ExpPoly.symbol(table, name, (u, v))
        return base ** e
    word = words.get(args[0], (args[0],))
    if kind == "add":
        base = ExpPoly.zero(table)
        for v in word:
            base = base + ExpPoly.symbol(table, name, (v,))
        return base ** e
    out = ExpPoly.one(table)
    for v in word:
        out = out * ExpPoly.symbol(table, name, (v,), e)
    return out


def apply_words(p: ExpPoly, words: Mapping[str, Tuple[str, ...]]) -> ExpPoly:
    """Substitute group words for variables, e.g. ``{"x": ("x", "y")}`` is x -> x∘y.

    Additive symbols split into sums, exponentials into products and
    biadditive symbols bilinearly.
    """
    table = p.table
    out = ExpPoly.zero(table)
    cache: Dict[Factor, ExpPoly] = {}
    for mono, c in p._terms.items():
        term = ExpPoly.const(table, c)
        for factor in mono:
            if factor not in cache:
                cache[factor] = _factor_at_words(table, factor[0], factor[1], factor[2], words)
            term = term * cache[factor]
        out = out + term
    return out


def expand_on_product(p: ExpPoly, left: str = "x", right: str = "y") -> ExpPoly:
    """Evaluate a one-variable polynomial (in ``x``) at the group product left∘right."""
    extra = p.variables() - {"x"}
    if extra:
        raise ExpPolyError(f"expand_on_product expects a polynomial in x only, got {sorted(extra)}")
    return apply_words(p, {"x": (left, right)})


def apply_field_product(p: ExpPoly, left: str = "x", right: str = "y") -> ExpPoly:
    """Evaluate a one-variable polynomial at the *field* product of two
    variables of an additively written field domain.

    Additive symbols ``a`` become ``a*(left, right)``; the embedding becomes
    ``id(left) * id(right)``.  Exponentials have no formal image.
    """
    table = p.table
    out = ExpPoly.zero(table)
    for mono, c in p._terms.items():
        term = ExpPoly.const(table, c)
        for name, args, e in mono:
            kind = table.kind(name)
            if name == EMBEDDING and table.embedding == "additive":
                f = ExpPoly.symbol(table, EMBEDDING, (left,)) * ExpPoly.symbol(table, EMBEDDING, (right,))
            elif kind == "add":
                f = ExpPoly.symbol(table, name + "*", (left, right))
            else:
                raise NotRepresentable(f"{name} has no formal value at a field product")
            term = term * f ** e
        out = out + term
    return out


# text input -----------------------------------------------------------------------

_FACTOR_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*\*?)(?:\(([^()]*)\))?(?:\^(\d+))?$")


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")


def _split_top(text: str, seps: str):
    parts, depth, cur = [], 0, ""
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        # "a1*(x,y)" is a single factor: the star belongs to the symbol name
        starred = ch == "*" and text[i + 1 : i + 2] == "(" and _NAME_RE.search(cur) is not None
        if depth == 0 and ch in seps and cur.strip() and not starred and not (ch in "+-" and cur.rstrip().endswith(("^", "/"))):
            parts.append(cur)
            cur = ch if ch in "+-" else ""
            continue
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def parse_exppoly(text: str, table: SymbolTable) -> ExpPoly:
    """Parse the text produced by :meth:`ExpPoly.dump` (Gaussian-rational coefficients).

    Bare symbol names default to the variable ``x``, so ``"3*a1 + m1 - 1"`` works.
    """
    out = ExpPoly.zero(table)
    s = text.strip()
    if s == "0":
        return out
    for term in _split_top(s, "+-"):
        sign = 1
        if term[0] in "+-":
            sign = -1 if term[0] == "-" else 1
            term = term[1:].strip()
        value = ExpPoly.const(table, sign)
        for factor in _split_top(term, "*"):
            factor = factor.strip()
            if factor.endswith("*"):
                raise ExpPolyError(f"malformed factor {factor!r}")
            try:
                value = value * as_scalar(factor)
                continue
            except (ValueError, TypeError):
                pass
            m = _FACTOR_RE.match(factor)
            if not m:
                raise ExpPolyError(f"cannot parse factor {factor!r}")
            name, args, power = m.group(1), m.group(2), m.group(3)
            arg_t = tuple(a.strip() for a in args.split(",")) if args else ("x",)
            if table.kind(name) == "bi" and len(arg_t) == 1:
                arg_t = arg_t * 2
            value = value * ExpPoly.symbol(table, name, arg_t, int(power) if power else 1)
        out = out + value
    return out
