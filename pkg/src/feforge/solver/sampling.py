"""Random exact parameter draws that satisfy a family's constraints."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Optional

import sympy as sp

from ..exppoly import GaussianRational, gaussian_sqrt
from ..exppoly.evaluate import to_gaussian
from .constraints import Branch
from .families import SolutionFamily

__all__ = ["random_rational", "sample_parameters"]


def random_rational(rng: random.Random, span: int = 9) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def _radicands(b: Branch):
    out = []
    for _, e in b.subs:
        for a in e.atoms(sp.Pow):
            if a.exp == sp.Rational(1, 2) and a.base.free_symbols and a.base not in out:
                out.append(a.base)
    return out


def _conic_point(q: sp.Poly, rng: random.Random) -> Fraction:
    """Rational t with q(t) a square in Q(i), q of degree two."""
    c2 = to_gaussian(q.LC())
    base = None
    for den in range(1, 8):
        for num in range(-12, 13):
            t0 = Fraction(num, den)
            s0 = gaussian_sqrt(to_gaussian(q.as_expr(), {q.gen: t0}))
            if s0 is not None:
                base = (t0, s0)
                break
        if base:
            break
    if base is None:
        raise ValueError(f"no rational point found on s^2 = {q.as_expr()}")
    t0, s0 = base
    dq = to_gaussian(q.diff(q.gen).as_expr(), {q.gen: t0})
    while True:
        k = GaussianRational(random_rational(rng))
        if k * k == c2:
            continue
        u = (dq - 2 * s0 * k) / (k * k - c2)
        if u.is_real:
            return t0 + u.re


def sample_parameters(fam: SolutionFamily, rng: random.Random, branch: Optional[Branch] = None) -> Dict[str, GaussianRational]:
    """Draw rational free parameters (square roots made exact) and complete the rest."""
    branches = fam.branches()
    b = branch if branch is not None else branches[rng.randrange(len(branches))]
    env: Dict[str, object] = {}
    radicands = _radicands(b)
    conic_vars = []
    for r in radicands:
        v = sorted(r.free_symbols, key=str)[-1]
        if v not in conic_vars:
            conic_vars.append(v)
    for s in b.free:
        if s not in conic_vars:
            env[s.name] = GaussianRational(random_rational(rng))
    for r in radicands:
        v = sorted(r.free_symbols, key=str)[-1]
        if v.name in env:
            continue
        q = sp.Poly(r.subs({sp.Symbol(k): sp.Rational(val.re.numerator, val.re.denominator) for k, val in env.items()}), v)
        if q.degree() == 1:
            s = random_rational(rng)
            c1, c0 = (to_gaussian(c) for c in q.all_coeffs())
            env[v.name] = (GaussianRational(s * s) - c0) / c1
        elif q.degree() == 2:
            env[v.name] = GaussianRational(_conic_point(q, rng))
        else:
            env[v.name] = GaussianRational(random_rational(rng))
    out = {k: v for k, v in env.items()}
    for s, e in b.subs:
        out[s.name] = to_gaussian(e, env)
    for p in fam.scalar_params:
        out.setdefault(p.name, GaussianRational(random_rational(rng)))
    return out
