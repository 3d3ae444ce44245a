"""Complete solution of small polynomial systems (≤ 4 unknowns, degree ≤ 2).

The solver eliminates one unknown at a time and splits into cases whenever
a factorization, a vanishing leading coefficient or a square root forces a
choice.  Square roots stay symbolic.  Every branch is verified by exact
back-substitution before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

__all__ = [
    "ConstraintSystem",
    "Branch",
    "SolvedSet",
    "UnsupportedSystem",
    "solve_constraints",
    "simplify_exact",
]

MAX_UNKNOWNS = 4
MAX_DEGREE = 2


class UnsupportedSystem(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    """Polynomial equations ``e == 0`` in ``params``.

    ``params`` also fixes the elimination preference: unknowns listed later
    are solved for first, earlier ones tend to remain free.
    """

    equations: Tuple[sp.Expr, ...]
    params: Tuple[sp.Symbol, ...]
    side_conditions: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(sp.sympify(e) for e in self.equations))
        object.__setattr__(self, "params", tuple(self.params))
        declared = set(self.params)
        for e in self.equations:
            extra = e.free_symbols - declared
            if extra:
                raise ValueError(f"undeclared parameter(s) {sorted(map(str, extra))} in constraint {e}")

    def residuals(self, values: Dict[sp.Symbol, object]) -> List[sp.Expr]:
        return [simplify_exact(e.subs(values)) for e in self.equations]

    def render(self) -> List[str]:
        return [f"{sp.sstr(e)} = 0" for e in self.equations]


@dataclass(frozen=True)
class Branch:
    subs: Tuple[Tuple[sp.Symbol, sp.Expr], ...]
    free: Tuple[sp.Symbol, ...]
    nonzero: Tuple[sp.Expr, ...] = ()

    @property
    def mapping(self) -> Dict[sp.Symbol, sp.Expr]:
        return dict(self.subs)

    def key(self):
        # fewer fixed params first, then "+" root choices before "-", then text
        return (len(self.subs), tuple(_negative(v) for _, v in self.subs), self.canonical())

    def canonical(self) -> str:
        return ", ".join(f"{sp.sstr(k)} = {sp.sstr(v)}" for k, v in self.subs)

    def __str__(self):
        text = "{" + self.canonical() + "}"
        if self.nonzero:
            text += " provided " + ", ".join(f"{sp.sstr(c)} != 0" for c in self.nonzero)
        return text


@dataclass(frozen=True)
class SolvedSet:
    system: ConstraintSystem
    branches: Tuple[Branch, ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    def contains(self, point: Dict[sp.Symbol, object]) -> bool:
        """True iff the exact point lies on some branch."""
        for b in self.branches:
            vals = {s: sp.sympify(point[s]) for s in b.free}
            if all(simplify_exact(e.subs(vals) - point[k]) == 0 for k, e in b.subs):
                if all(simplify_exact(c.subs(vals)) != 0 for c in b.nonzero):
                    return True
        return False


def _negative(v: sp.Expr) -> bool:
    roots = sorted((a for a in v.atoms(sp.Pow) if a.exp == sp.Rational(1, 2)), key=str)
    if roots:
        return bool(v.coeff(roots[0]).could_extract_minus_sign())
    return bool(v.could_extract_minus_sign())


def simplify_exact(e) -> sp.Expr:
    e = sp.sympify(e)
    if e.is_number:
        return sp.expand(sp.radsimp(e))
    return sp.expand(sp.radsimp(sp.cancel(sp.expand(e))))


def _numer(e: sp.Expr) -> Tuple[sp.Expr, sp.Expr]:
    e = sp.together(sp.expand(e))
    n, d = sp.fraction(e)
    return sp.expand(n), d


def _exact_sqrt(disc: sp.Expr) -> sp.Expr:
    """sqrt(disc) with every squared factor pulled out of the radical."""
    disc = sp.expand(disc)
    if disc == 0:
        return sp.Integer(0)
    syms = sorted(disc.free_symbols, key=str)
    if not syms:
        return sp.sqrt(disc)
    coef, facs = sp.factor_list(disc, *syms, gaussian=True)
    outside, inside = sp.Integer(1), sp.Integer(coef)
    for fac, mult in facs:
        outside *= fac ** (mult // 2)
        if mult % 2:
            inside *= fac
    return sp.expand(outside) * sp.sqrt(sp.expand(inside))


def _poly_in(e: sp.Expr, v: sp.Symbol):
    try:
        return sp.Poly(e, v)
    except sp.PolynomialError:
        return None


def _candidates(eqs: Sequence[sp.Expr], order: Sequence[sp.Symbol]):
    """Rank (equation, unknown) pivots; lower rank is easier."""
    best = None
    pos = {s: i for i, s in enumerate(order)}
    for idx, e in enumerate(eqs):
        for v in sorted(e.free_symbols & set(order), key=lambda s: -pos[s]):
            p = _poly_in(e, v)
            if p is None or p.degree() < 1:
                continue
            if p.degree() > MAX_DEGREE:
                raise UnsupportedSystem(f"degree {p.degree()} in {v}: outside the supported fragment")
            lead = p.LC()
            numeric = not sp.sympify(lead).free_symbols
            if p.degree() == 1:
                rank = 0 if numeric else 1
            else:
                rank = 2 if numeric else 3
            cand = (rank, -pos[v], len(str(e)), idx, v, p)
            if best is None or cand[:4] < best[:4]:
                best = cand
    return best


def _substitute(subs: Dict[sp.Symbol, sp.Expr], v: sp.Symbol, value: sp.Expr) -> Dict[sp.Symbol, sp.Expr]:
    out = {k: simplify_exact(e.subs(v, value)) for k, e in subs.items()}
    out[v] = simplify_exact(value)
    return out


def _recurse(eqs, subs, nonzero, order, depth=0):
    if depth > 32:
        raise UnsupportedSystem("elimination did not terminate")
    work = []
    for e in eqs:
        n, d = _numer(e.subs(subs))
        if d.free_symbols:
            nonzero = nonzero + (d,)
        n = simplify_exact(n)
        if n == 0:
            continue
        if not n.free_symbols:
            return []
        work.append(n)
    if not work:
        return [(subs, nonzero)]
    # split on a factorization first
    for i, e in enumerate(work):
        _, facs = sp.factor_list(e, *sorted(e.free_symbols, key=str), gaussian=True)
        if len(facs) > 1 or (facs and facs[0][1] > 1):
            out = []
            for fac, _ in facs:
                out += _recurse(work[:i] + [fac] + work[i + 1 :], subs, nonzero, order, depth + 1)
            return out
    cand = _candidates(work, order)
    if cand is None:
        raise UnsupportedSystem("no unknown can be isolated")
    rank, _, _, idx, v, p = cand
    rest = work[:idx] + work[idx + 1 :]
    coeffs = p.all_coeffs()
    out = []
    if p.degree() == 1:
        a, b = coeffs
        if rank == 1:
            out += _recurse(rest + [a, b], subs, nonzero, order, depth + 1)
            nonzero = nonzero + (a,)
        out += _recurse(rest, _substitute(subs, v, -b / a), nonzero, order, depth + 1)
        return out
    c2, c1, c0 = coeffs
    if rank == 3:
        out += _recurse(rest + [c2, c1 * v + c0], subs, nonzero, order, depth + 1)
        nonzero = nonzero + (c2,)
    root = _exact_sqrt(c1 * c1 - 4 * c2 * c0)
    for sgn in ((1,) if root == 0 else (1, -1)):
        value = (-c1 + sgn * root) / (2 * c2)
        out += _recurse(rest, _substitute(subs, v, value), nonzero, order, depth + 1)
    return out


def _verify(system: ConstraintSystem, b: Branch) -> bool:
    m = b.mapping
    return all(simplify_exact(e.subs(m)) == 0 for e in system.equations)


def _subsumed(b: Branch, other: Branch, params) -> bool:
    """Every point of ``b`` lies on ``other``."""
    mb = b.mapping
    val = {p: mb.get(p, p) for p in params}
    for p, e in other.subs:
        if simplify_exact(e.subs({q: val[q] for q in other.free}) - val[p]) != 0:
            return False
    return all(simplify_exact(c.subs({q: val[q] for q in other.free})) != 0 for c in other.nonzero) or not other.nonzero


def solve_constraints(system: ConstraintSystem) -> SolvedSet:
    """Complete, verified, canonically ordered branch list."""
    unknowns = set().union(*(e.free_symbols for e in system.equations)) if system.equations else set()
    if len(unknowns) > MAX_UNKNOWNS:
        raise UnsupportedSystem(f"{len(unknowns)} unknowns; at most {MAX_UNKNOWNS} are supported")
    for e in system.equations:
        if e.free_symbols and sp.Poly(e, *sorted(e.free_symbols, key=str)).total_degree() > MAX_DEGREE:
            raise UnsupportedSystem(f"constraint {e} has total degree above {MAX_DEGREE}")
    raw = _recurse(list(system.equations), {}, (), system.params)
    branches = []
    for subs, nonzero in raw:
        free = tuple(p for p in system.params if p not in subs)
        conds = []
        for c in nonzero:
            c = simplify_exact(c.subs(subs))
            if c == 0:
                break
            if c.free_symbols and c not in conds:
                conds.append(c)
        else:
            ordered = tuple((p, subs[p]) for p in system.params if p in subs)
            # provisos from divisions only matter if a value still has a symbolic denominator
            if not any(sp.fraction(sp.together(v))[1].free_symbols for _, v in ordered):
                conds = []
            b = Branch(ordered, free, tuple(conds))
            if not _verify(system, b):
                raise AssertionError(f"branch {b} fails back-substitution")
            branches.append(b)
    unique = []
    for b in sorted(branches, key=Branch.key):
        if any(b.canonical() == u.canonical() for u in unique):
            continue
        unique.append(b)
    kept = [b for b in unique if not any(o is not b and len(o.free) > len(b.free) and _subsumed(b, o, system.params) for o in unique)]
    return SolvedSet(system, tuple(kept))
