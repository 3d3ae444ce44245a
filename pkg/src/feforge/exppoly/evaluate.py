"""Evaluate sympy coefficient expressions exactly in Q(i), modulo p, or in floating point."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Set

import sympy as sp

from .poly import NotRepresentable
from .scalar import GaussianRational, as_scalar, gaussian_sqrt

__all__ = ["to_gaussian", "mod_p_values", "to_complex", "sqrt_mod_p"]


def _env(env) -> Dict[str, object]:
    return {str(k): v for k, v in (env or {}).items()}


def to_gaussian(expr, env: Mapping = None) -> GaussianRational:
    """Exact value in Q(i); square roots must be exact there."""
    env = _env(env)

    def ev(e) -> GaussianRational:
        if isinstance(e, GaussianRational):
            return e
        if isinstance(e, (int, Fraction)):
            return as_scalar(e)
        if e.is_Symbol:
            if e.name not in env:
                raise KeyError(f"no value for {e.name}")
            return as_scalar(env[e.name])
        if e.is_Integer or e.is_Rational:
            return GaussianRational(Fraction(int(e.p), int(e.q)))
        if e is sp.I:
            return GaussianRational(0, 1)
        if e.is_Add:
            out = GaussianRational(0)
            for t in e.args:
                out = out + ev(t)
            return out
        if e.is_Mul:
            out = GaussianRational(1)
            for t in e.args:
                out = out * ev(t)
            return out
        if e.is_Pow:
            base, ex = e.args
            b = ev(base)
            if ex.is_Integer:
                return b ** int(ex)
            if ex.is_Rational and ex.q == 2:
                r = gaussian_sqrt(b)
                if r is None:
                    raise NotRepresentable(f"sqrt({b}) is not a Gaussian rational")
                return r ** int(ex.p)
        raise NotRepresentable(f"cannot evaluate {e} exactly")

    return ev(sp.sympify(expr))


def sqrt_mod_p(a: int, p: int) -> Set[int]:
    a %= p
    return {r for r in range(p) if (r * r - a) % p == 0}


def mod_p_values(expr, p: int, env: Mapping = None) -> Set[int]:
    """All values of ``expr`` in F_p; square roots and ``I`` are multi-valued,
    division by zero yields no value."""
    env = _env(env)

    def ev(e) -> Set[int]:
        if e.is_Symbol:
            return {int(env[e.name]) % p}
        if e.is_Integer:
            return {int(e) % p}
        if e.is_Rational:
            if e.q % p == 0:
                return set()
            return {int(e.p) * pow(int(e.q), -1, p) % p}
        if e is sp.I:
            return sqrt_mod_p(-1, p)
        if e.is_Add or e.is_Mul:
            acc = {0} if e.is_Add else {1}
            for t in e.args:
                vals = ev(t)
                acc = {(a + b) % p if e.is_Add else (a * b) % p for a in acc for b in vals}
            return acc
        if e.is_Pow:
            base, ex = e.args
            bs = ev(base)
            if ex.is_Integer:
                k = int(ex)
                return {pow(b, k, p) for b in bs if k >= 0 or b}
            if ex.is_Rational and ex.q == 2:
                out = set()
                for b in bs:
                    for r in sqrt_mod_p(b, p):
                        if ex.p < 0 and r == 0:
                            continue
                        out.add(pow(r, int(ex.p), p))
                return out
        raise NotRepresentable(f"cannot evaluate {e} modulo {p}")

    return ev(sp.sympify(expr))


def to_complex(expr, env: Mapping = None) -> complex:
    env = {k: complex(v) if not isinstance(v, complex) else v for k, v in _env(env).items()}
    e = sp.sympify(expr)
    val = complex(e.evalf(subs={sp.Symbol(k): v for k, v in env.items()}))
    return val
