"""Curated table of parametric solution families, keyed by shape and domain.

Each family is a pair of ExpPoly templates whose coefficients are sympy
expressions in the scalar parameters, plus the polynomial constraints those
parameters must satisfy.  Every family is checked against the symbolic
residual whenever it is realized.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple, Union

import sympy as sp

from ..eqdsl import DomainClass, DomainSpec, ShapeId, parse
from ..eqdsl.ast import Equation
from ..eqdsl.classify import canonical_equation_text
from ..exppoly import ExpPoly, GaussianRational, NotRepresentable, SymbolTable, as_scalar, residual, table_for
from ..exppoly.evaluate import to_gaussian
from .constraints import ConstraintSystem, SolvedSet, UnsupportedSystem, solve_constraints

__all__ = [
    "Param",
    "SolutionFamily",
    "Unsupported",
    "UnsupportedShapeError",
    "ConstraintViolation",
    "NonRealError",
    "MissingParameter",
    "solve_shape",
    "realize",
    "real_admissible",
    "check_membership",
    "family_equation",
]

SCALAR_KINDS = ("complexScalar", "realScalar", "realInterval")
SYMBOL_KINDS = ("additiveSymbol", "exponentialSymbol", "logarithmicSymbol")


class UnsupportedShapeError(ValueError):
    pass


class ConstraintViolation(ValueError):
    pass


class NonRealError(ConstraintViolation):
    pass


class MissingParameter(ValueError):
    pass


@dataclass(frozen=True)
class Param:
    name: str
    kind: str
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    given: bool = False

    def __post_init__(self):
        if self.kind not in SCALAR_KINDS + SYMBOL_KINDS:
            raise ValueError(f"unknown parameter kind {self.kind!r}")

    @property
    def is_scalar(self) -> bool:
        return self.kind in SCALAR_KINDS

    @property
    def symbol(self) -> sp.Symbol:
        return sp.Symbol(self.name)

    def describe(self) -> str:
        if self.kind == "realInterval":
            return f"{self.name} in [{self.lo}, {self.hi}]"
        tag = ", given by the equation" if self.given else ""
        return f"{self.name}: {self.kind}{tag}"


@dataclass(frozen=True)
class Unsupported:
    shape: ShapeId
    domain: DomainSpec
    reason: str


@dataclass(frozen=True)
class SolutionFamily:
    shape: ShapeId
    domain: DomainSpec
    label: str
    params: Tuple[Param, ...]
    template_f: ExpPoly
    template_alpha: Optional[ExpPoly]
    constraints: ConstraintSystem
    notes: Tuple[str, ...] = ()
    real_forms: Tuple[str, ...] = ()
    real: bool = False
    # parameter groups whose joint vanishing drops a symbol (degenerate branch)
    degenerate: Tuple[Tuple[str, ...], ...] = ()

    @property
    def table(self) -> SymbolTable:
        return self.template_f.table

    @property
    def scalar_params(self) -> Tuple[Param, ...]:
        return tuple(p for p in self.params if p.is_scalar)

    @property
    def symbol_params(self) -> Tuple[Param, ...]:
        return tuple(p for p in self.params if not p.is_scalar)

    @property
    def equation(self) -> Equation:
        return family_equation(self.shape, self.domain)

    @property
    def solved(self) -> SolvedSet:
        return _solve_cached(self.constraints)

    def is_degenerate(self, branch) -> bool:
        fixed = {s.name: e for s, e in branch.subs}
        return any(all(fixed.get(n) == 0 for n in group) for group in self.degenerate)

    def branches(self):
        """Solved branches, nondegenerate ones first."""
        bs = list(self.solved)
        return [b for b in bs if not self.is_degenerate(b)] + [b for b in bs if self.is_degenerate(b)]

    def param(self, name: str) -> Param:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)


@lru_cache(maxsize=None)
def _solve_cached(cs: ConstraintSystem) -> SolvedSet:
    return solve_constraints(cs)


@lru_cache(maxsize=None)
def family_equation(shape: ShapeId, domain: DomainSpec) -> Equation:
    op = domain.op_symbol or "*"
    return parse(canonical_equation_text(shape, op), domain)


# template construction ----------------------------------------------------------

S = sp.Symbol
HALF = sp.Rational(1, 2)


def _sym(T: SymbolTable, name: str, args=("x",), power: int = 1) -> ExpPoly:
    return ExpPoly.symbol(T, name, args, power)


def _c(T: SymbolTable, value) -> ExpPoly:
    return ExpPoly.const(T, value)


def _add_kind(domain: DomainSpec) -> str:
    return "logarithmicSymbol" if domain.group_op == "multiplicative" else "additiveSymbol"


def _cs(equations=(), params=(), side=()) -> ConstraintSystem:
    return ConstraintSystem(tuple(equations), tuple(S(p) for p in params), tuple(side))


def _s1(d: DomainSpec) -> List[SolutionFamily]:
    T = table_for(d)
    f = _sym(T, "B", ("x", "x")) * HALF + _sym(T, "a1")
    return [
        SolutionFamily(
            ShapeId.S1, d, "biadditive", (Param("a1", _add_kind(d)),), f, None, _cs(),
            ("B is the given symmetric biadditive map", "requires 1/2 in the codomain"),
        )
    ]


def _s2(d: DomainSpec) -> List[SolutionFamily]:
    if not d.embeds or d.group_op != "additive":
        raise UnsupportedShapeError("alpha*x*y needs an additive domain inside the codomain field")
    T = table_for(d)
    f = _sym(T, "id", power=2) * (S("alpha") / 2) + _sym(T, "a1")
    params = (Param("alpha", "complexScalar", given=True), Param("a1", "additiveSymbol"))
    return [SolutionFamily(ShapeId.S2, d, "quadratic", params, f, None, _cs((), ("alpha",)), ("id is the embedding x -> x",))]


def _s3(d: DomainSpec) -> List[SolutionFamily]:
    if not d.embeds or d.group_op != "multiplicative":
        raise UnsupportedShapeError("alpha*x*y needs a multiplicative domain inside the codomain field")
    T = table_for(d)
    params = (Param("alpha", "complexScalar", given=True), Param("a1", "logarithmicSymbol"))
    cs = _cs((S("alpha"),), ("alpha",), ("the cocycle identity forces alpha = 0",))
    if d.has_zero:
        return [
            SolutionFamily(
                ShapeId.S3, d, "zero", params[:1], ExpPoly.zero(T), None, cs,
                ("alpha must be 0", "f is identically zero when 0 is in the domain"),
            )
        ]
    return [SolutionFamily(ShapeId.S3, d, "logarithmic", params, _sym(T, "a1"), None, cs, ("alpha must be 0",))]


def _s4(d: DomainSpec) -> List[SolutionFamily]:
    if not d.has_identity:
        raise UnsupportedShapeError("S4 needs a neutral element (monoid or group domain)")
    T = table_for(d)
    c = S("c")
    f = _sym(T, "a1") + _c(T, c)
    a = _c(T, -c)
    params = (Param("c", "complexScalar"), Param("a1", _add_kind(d)))
    return [SolutionFamily(ShapeId.S4, d, "constant-perturbation", params, f, a, _cs((), ("c",)), ("c = f(e) at the neutral element e", "alpha is constant"))]


def _s5(d: DomainSpec) -> List[SolutionFamily]:
    if not d.is_field_like or d.group_op != "additive":
        raise UnsupportedShapeError("alpha(x*y) with an additive Cauchy difference needs a field domain")
    T = table_for(d)
    g = S("gamma")
    a = _sym(T, "a1") + _c(T, g)
    f = _sym(T, "a1*", ("x", "x")) * HALF + _sym(T, "a2") - _c(T, g)
    params = (Param("gamma", "complexScalar"), Param("a1", "additiveSymbol"), Param("a2", "additiveSymbol"))
    notes = ("a1*(x,x) stands for a1(x*x)", "the constant in f enters with a minus sign")
    return [SolutionFamily(ShapeId.S5, d, "field-product", params, f, a, _cs((), ("gamma",)), notes)]


def _s6(d: DomainSpec) -> List[SolutionFamily]:
    dstar = d.has_zero
    if not (d.is_group or dstar):
        raise UnsupportedShapeError("S6 is solved on commutative groups and on groups with an absorbing zero adjoined")
    T = table_for(d)
    al, g = S("alpha"), S("gamma")
    m1 = _sym(T, "m1")
    add = Param("a1", _add_kind(d))
    general_params = (Param("alpha", "complexScalar"), Param("gamma", "complexScalar"), add, Param("m1", "exponentialSymbol"))
    general_f = _sym(T, "a1") * g + (m1 - 1) * al**2
    general_a = (m1 - 1) * al
    const_params = (Param("alpha", "complexScalar"), Param("gamma", "complexScalar"), add)
    const_f = _sym(T, "a1") * g - _c(T, al**2)
    const_a = _c(T, -al)
    if dstar:
        cs = _cs((g,), ("alpha", "gamma"), ("gamma = 0 is forced by the absorbing zero",))
        note = ("gamma = 0 is forced on domains containing 0",)
        return [
            SolutionFamily(ShapeId.S6, d, "exponential", general_params, general_f, general_a, cs, note + ("m1(0) is 0 unless m1 is identically 1",)),
            SolutionFamily(ShapeId.S6, d, "constant", const_params, const_f, const_a, cs, note + ("alpha is constant",)),
        ]
    quad_params = (Param("a1", _add_kind(d)), Param("a2", _add_kind(d)))
    quad_f = _sym(T, "a1", power=2) * HALF + _sym(T, "a2")
    quad_a = _sym(T, "a1")
    return [
        SolutionFamily(ShapeId.S6, d, "exponential", general_params, general_f, general_a, _cs((), ("alpha", "gamma"))),
        SolutionFamily(ShapeId.S6, d, "constant", const_params, const_f, const_a, _cs((), ("alpha", "gamma")), ("exponential m1 identically zero",)),
        SolutionFamily(ShapeId.S6, d, "quadratic", quad_params, quad_f, quad_a, _cs(), ("alpha is additive; limit of the exponential family as m1 -> 1",)),
    ]


def _s78(shape: ShapeId, d: DomainSpec) -> List[SolutionFamily]:
    need = "multiplicative" if shape == ShapeId.S7 else "additive"
    if not d.has_identity:
        raise UnsupportedShapeError(f"{shape.value} needs a neutral element: the argument sets y to it")
    if d.group_op != need:
        raise UnsupportedShapeError(f"{shape.value} needs a {need} domain")
    T = table_for(d)
    c = S("c")
    m1 = _sym(T, "m1")
    params = (Param("c", "complexScalar"), Param("m1", "exponentialSymbol"))
    return [SolutionFamily(shape, d, "exponential", params, m1 * c, m1 * (c - c**2), _cs((), ("c",)), ("c = f(e) at the neutral element e",))]


def _s9(d: DomainSpec) -> List[SolutionFamily]:
    if not d.is_group:
        raise UnsupportedShapeError("S9 is solved on commutative groups")
    T = table_for(d)
    g1, g2, a1, a2, g, al = (S(n) for n in ("gamma1", "gamma2", "alpha1", "alpha2", "gamma", "alpha"))
    m, mm1, mm2 = _sym(T, "m1"), _sym(T, "m1"), _sym(T, "m2")
    add = _sym(T, "a1")
    scal4 = tuple(Param(n, "complexScalar") for n in ("gamma1", "gamma2", "alpha1", "alpha2"))
    sys_i = _cs((g1**2 + a1**2, g2**2 + a2**2 - g2, g1 * g2 + a1 * a2 - g1), ("alpha1", "gamma2", "gamma1", "alpha2"))
    sys_ii = _cs(
        (g1**2 + a1**2 - g1, g2**2 + a2**2 - g2, g1 * g2 + a1 * a2),
        ("alpha1", "gamma1", "gamma2", "alpha2"),
        ("m1 and m2 are linearly independent",),
    )
    sys_iii = _cs((g - g**2 - al**2,), ("gamma", "alpha"))
    return [
        SolutionFamily(
            ShapeId.S9, d, "case (i)", scal4 + (Param("a1", _add_kind(d)), Param("m1", "exponentialSymbol")),
            (add * g1 + _c(T, g2)) * m, (add * a1 + _c(T, a2)) * m, sys_i,
            degenerate=(("gamma1", "alpha1"),),
        ),
        SolutionFamily(
            ShapeId.S9, d, "case (ii)", scal4 + (Param("m1", "exponentialSymbol"), Param("m2", "exponentialSymbol")),
            mm1 * g1 + mm2 * g2, mm1 * a1 + mm2 * a2, sys_ii,
            degenerate=(("gamma1", "alpha1"), ("gamma2", "alpha2")),
        ),
        SolutionFamily(
            ShapeId.S9, d, "case (iii)", (Param("gamma", "complexScalar"), Param("alpha", "complexScalar"), Param("m1", "exponentialSymbol")),
            m * g, m * al, sys_iii, ("gamma = 0 gives the zero solution",),
        ),
    ]


_BUILDERS = {
    ShapeId.S1: _s1,
    ShapeId.S2: _s2,
    ShapeId.S3: _s3,
    ShapeId.S4: _s4,
    ShapeId.S5: _s5,
    ShapeId.S6: _s6,
    ShapeId.S7: lambda d: _s78(ShapeId.S7, d),
    ShapeId.S8: lambda d: _s78(ShapeId.S8, d),
    ShapeId.S9: _s9,
}


@lru_cache(maxsize=None)
def _families(shape: ShapeId, domain: DomainSpec) -> Tuple[SolutionFamily, ...]:
    return tuple(_BUILDERS[shape](domain))


def solve_shape(shape: ShapeId, domain: DomainSpec) -> Union[List[SolutionFamily], Unsupported]:
    """Proved solution families for ``shape`` on ``domain``."""
    shape = ShapeId(shape)
    if shape == ShapeId.OpenProblemMixed:
        return Unsupported(shape, domain, "unsupported: open problem, no solution method is known for this mixed equation")
    if shape == ShapeId.Unrecognized:
        raise UnsupportedShapeError("the equation does not match a supported shape")
    if domain.group_op is None:
        default = "additive" if shape in (ShapeId.S2, ShapeId.S5, ShapeId.S8) else "multiplicative"
        domain = domain.with_op(default)
    return list(_families(shape, domain))


# realization ------------------------------------------------------------------------------------------


def _check_interval(fam: SolutionFamily, name: str, value: GaussianRational):
    p = fam.param(name)
    if not fam.real:
        return
    if not value.is_real:
        raise NonRealError(f"{name} = {value} is not real")
    if p.kind == "realInterval" and not (p.lo <= value.re <= p.hi):
        raise NonRealError(f"{name} = {value} lies outside [{p.lo}, {p.hi}]: the realized functions would not be real-valued")


def _complete(fam: SolutionFamily, given: Dict[str, GaussianRational]) -> Dict[str, GaussianRational]:
    names = [p.name for p in fam.scalar_params]
    if all(n in given for n in names):
        env = {n: given[n] for n in names}
        for e in fam.constraints.equations:
            v = to_gaussian(e, env)
            if v != 0:
                raise ConstraintViolation(f"constraint {sp.sstr(e)} = 0 is violated (value {v})")
        return env
    problems = []
    missing = set()
    for b in fam.branches():
        free = [s.name for s in b.free]
        absent = [n for n in free if n not in given]
        if absent:
            missing.update(absent)
            continue
        env = {n: given[n] for n in free}
        try:
            vals = {s.name: to_gaussian(e, env) for s, e in b.subs}
        except NotRepresentable as exc:
            problems.append(f"branch {b}: {exc}")
            continue
        except ZeroDivisionError:
            continue
        if any(n in given and given[n] != v for n, v in vals.items()):
            continue
        env.update(vals)
        for n in names:
            env.setdefault(n, given.get(n, GaussianRational(0)))
        return env
    eqs = "; ".join(fam.constraints.render()) or "none"
    if problems:
        raise ConstraintViolation(f"constraints [{eqs}] cannot be met over Q(i): " + "; ".join(problems))
    if missing:
        raise MissingParameter(f"supply values for {sorted(missing)} to pick a solution of [{eqs}]")
    raise ConstraintViolation(f"the given values violate the constraints [{eqs}]")


def _instantiate(template: ExpPoly, env: Mapping[str, GaussianRational], renames: Mapping[str, str]) -> ExpPoly:
    p = template.map_coefficients(lambda c: to_gaussian(c, env) if isinstance(c, sp.Basic) else c)
    return p.substitute_symbols(renames) if renames else p


def _known_values(fam: SolutionFamily, env) -> Dict[str, object]:
    return {p.name: env[p.name] for p in fam.scalar_params if p.given}


def realize(fam: SolutionFamily, vals: Optional[Mapping[str, object]] = None) -> Tuple[ExpPoly, Optional[ExpPoly]]:
    """Concrete (f, alpha) for parameter values; raises on constraint violation.

    Scalars not supplied are completed from the solved constraint branches
    when they are determined; symbol parameters may be renamed (an
    exponential may also be sent to ``"0"`` or ``"1"``).
    """
    vals = dict(vals or {})
    known = {p.name for p in fam.params}
    extra = sorted(set(vals) - known)
    if extra:
        raise KeyError(f"unknown parameter(s) {extra} for family {fam.label}")
    given, renames = {}, {}
    for name, v in vals.items():
        p = fam.param(name)
        if p.is_scalar:
            given[name] = as_scalar(v) if not isinstance(v, sp.Basic) else to_gaussian(v)
        else:
            renames[name] = str(v)
            if renames[name] == "1" and p.kind != "exponentialSymbol":
                raise ValueError(f"{name} is additive and cannot be the constant 1")
    for n, v in given.items():
        _check_interval(fam, n, v)
    env = _complete(fam, given)
    for n, v in env.items():
        _check_interval(fam, n, v)
    f = _instantiate(fam.template_f, env, renames)
    a = None if fam.template_alpha is None else _instantiate(fam.template_alpha, env, renames)
    assign = {"f": f} if a is None else {"f": f, "a": a}
    res = residual(fam.equation, assign, _known_values(fam, env))
    if not res.is_zero():
        raise AssertionError(f"family {fam.label} realized with nonzero residual {res}")
    return f, a


# real-valued solutions ------------------------------------------------------------------------------------

_REAL_INTERVALS = {
    ("case (i)", "alpha1"): (Fraction(0), Fraction(0)),
    ("case (ii)", "alpha1"): (Fraction(-1, 2), Fraction(1, 2)),
    ("case (iii)", "gamma"): (Fraction(0), Fraction(1)),
}


def _real_forms(d: DomainSpec) -> Tuple[str, ...]:
    if d.domain_class == DomainClass.RealLine:
        return ("additive a(x) = c*x", "exponential m(x) = exp(lambda*x)", "exponential m(x) = 0")
    if d.domain_class == DomainClass.RealPositive:
        return ("logarithmic l(x) = c*ln(x)", "exponential m(x) = x^mu", "exponential m(x) = 0")
    if d.domain_class == DomainClass.RealNonzero:
        return ("logarithmic l(x) = c*ln|x|", "exponential m(x) = |x|^mu", "exponential m(x) = sign(x)*|x|^mu", "exponential m(x) = 0")
    if d.domain_class == DomainClass.RealWithZero:
        return ("exponential m(x) = |x|^mu with m(0) = 0", "exponential m(x) = sign(x)*|x|^mu with m(0) = 0", "exponential m(x) = 0", "exponential m(x) = 1")
    if d.domain_class == DomainClass.RealNonneg:
        return ("exponential m(x) = x^mu with m(0) = 0", "exponential m(x) = 0", "exponential m(x) = 1")
    return ()


def real_admissible(fam: SolutionFamily) -> SolutionFamily:
    """Restrict parameters so the realized functions are real-valued."""
    params = []
    notes = list(fam.notes)
    for p in fam.params:
        if p.is_scalar:
            bounds = _REAL_INTERVALS.get((fam.label, p.name)) if fam.shape == ShapeId.S9 else None
            if bounds:
                params.append(Param(p.name, "realInterval", bounds[0], bounds[1], p.given))
            else:
                params.append(Param(p.name, "realScalar", given=p.given))
        else:
            params.append(p)
    if fam.shape == ShapeId.S9 and fam.label == "case (i)":
        notes.append("real-valued only for alpha1 = 0: alpha vanishes and f is exponential")
    return replace(fam, params=tuple(params), notes=tuple(notes), real=True, real_forms=_real_forms(fam.domain))


# membership ------------------------------------------------------------------------------------------


def _symbols_by_kind(table: SymbolTable, polys) -> Dict[str, set]:
    out: Dict[str, set] = {"add": set(), "exp": set()}
    for p in polys:
        for name in p.symbols():
            kind = table.kind(name)
            base = name[:-1] if name.endswith("*") else name
            if name == "id" or kind == "bi" and not name.endswith("*"):
                continue
            out["add" if table.kind(base) == "add" else "exp"].add(base)
    return out


def _renamings(fam: SolutionFamily, present: Dict[str, set]):
    syms = fam.symbol_params
    choices = []
    for p in syms:
        kind = "exp" if p.kind == "exponentialSymbol" else "add"
        opts = [p.name] + sorted(present[kind] - {p.name})
        choices.append(opts)
    for combo in itertools.product(*choices):
        if len(set(combo)) == len(combo):
            yield {p.name: t for p, t in zip(syms, combo) if p.name != t}


def _coef_sym(c):
    return c if isinstance(c, sp.Basic) else sp.sympify(c)


def check_membership(f: ExpPoly, alpha: Optional[ExpPoly], fam: SolutionFamily) -> Optional[Dict[str, object]]:
    """Parameter values reproducing (f, alpha) exactly, or None."""
    if f.table != fam.table or (alpha is not None and alpha.table != fam.table):
        return None
    if fam.template_alpha is None and alpha is not None and not alpha.is_zero():
        return None
    present = _symbols_by_kind(fam.table, [q for q in (f, alpha) if q is not None])
    order = tuple(p.symbol for p in fam.scalar_params)
    pairs = [(fam.template_f, f)]
    if fam.template_alpha is not None:
        pairs.append((fam.template_alpha, alpha if alpha is not None else ExpPoly.zero(fam.table)))
    for ren in _renamings(fam, present):
        eqs = list(fam.constraints.equations)
        ok = True
        for tmpl, data in pairs:
            t = tmpl.substitute_symbols(ren) if ren else tmpl
            for mono in set(t.monomials()) | set(data.monomials()):
                e = sp.expand(_coef_sym(t.coefficient(mono)) - _coef_sym(data.coefficient(mono)))
                if e == 0:
                    continue
                if not e.free_symbols:
                    ok = False
                    break
                eqs.append(e)
            if not ok:
                break
        if not ok:
            continue
        try:
            solved = solve_constraints(ConstraintSystem(tuple(eqs), order))
        except UnsupportedSystem:
            continue
        for b in solved:
            env = {s.name: GaussianRational(0) for s in b.free}
            try:
                env.update({s.name: to_gaussian(e, env) for s, e in b.subs})
            except (NotRepresentable, ZeroDivisionError):
                continue
            vals: Dict[str, object] = dict(env)
            vals.update(ren)
            try:
                rf, ra = realize(fam, vals)
            except (ConstraintViolation, MissingParameter):
                continue
            if rf == f and (fam.template_alpha is None or ra == (alpha if alpha is not None else ExpPoly.zero(fam.table))):
                return vals
    return None
