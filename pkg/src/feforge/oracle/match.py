"""Instantiate formal symbols on finite models and match tables against families."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from ..exppoly import ExpPoly, GaussianRational
from ..solver.families import SolutionFamily, check_membership, realize
from .characters import TOLERANCE, CharacterModel
from .enumerate import PrimeFieldModel, enumerate_additive, enumerate_exponential

__all__ = [
    "evaluate_exppoly",
    "gaussian_mod_p",
    "instantiate",
    "match_family",
    "family_tables",
]


def gaussian_mod_p(c: GaussianRational, p: int) -> Optional[int]:
    """Image of a Gaussian rational in F_p, or None (denominator divisible by p, or no sqrt(-1))."""
    out = 0
    for part, unit in ((c.re, 1), (c.im, None)):
        if part == 0:
            continue
        if part.denominator % p == 0:
            return None
        v = part.numerator * pow(part.denominator, -1, p)
        if unit is None:
            roots = [r for r in range(p) if (r * r + 1) % p == 0]
            if not roots:
                return None
            v *= roots[0]
        out += v
    return out % p


def evaluate_exppoly(poly: ExpPoly, symbols: Mapping[str, np.ndarray], n: int, coef, p: Optional[int] = None) -> np.ndarray:
    """Table of ``poly`` on an n-element model.

    ``symbols`` maps one-variable symbols to length-n arrays and two-argument
    symbols (``B``, ``a1*``) to n x n arrays.  Polynomials in x give a
    vector; polynomials in x and y give a matrix (x along axis 0).
    ``coef`` converts coefficients to field values; ``p`` selects mod-p
    arithmetic, otherwise complex.
    """
    two = "y" in poly.variables()
    shape = (n, n) if two else (n,)
    dtype = np.int64 if p is not None else complex
    total = np.zeros(shape, dtype=dtype)

    def view(name, args):
        arr = np.asarray(symbols[name])
        if arr.ndim == 1:
            (v,) = args
            return arr[:, None] if (two and v == "x") else (arr[None, :] if v == "y" else arr)
        u, v = args
        if u == v:
            d = np.diagonal(arr)
            return d[:, None] if (two and u == "x") else (d[None, :] if u == "y" else d)
        return arr if (u, v) == ("x", "y") else arr.T

    for mono, c in poly.items():
        term = np.full(shape, coef(c), dtype=dtype)
        for name, args, e in mono:
            v = view(name, args)
            for _ in range(e):
                term = term * v
                if p is not None:
                    term %= p
        total = total + term
        if p is not None:
            total %= p
    return total


def _symbol_arrays(model, inst: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
    out = dict(inst)
    d = model.domain
    if getattr(d, "embed", None) is not None:
        out["id"] = d.embed
    if isinstance(model, PrimeFieldModel):
        if model.B is not None:
            out["B"] = model.B
        if d.field_mul is not None:
            for name, arr in inst.items():
                out[name + "*"] = np.asarray(arr)[d.field_mul]
    return out


def instantiate(poly: ExpPoly, model, inst: Mapping[str, np.ndarray]) -> np.ndarray:
    """Table of a realized (numeric) ExpPoly under a symbol instantiation."""
    arrays = _symbol_arrays(model, inst)
    if isinstance(model, PrimeFieldModel):
        p = model.p

        def coef(c):
            v = gaussian_mod_p(c, p)
            if v is None:
                raise ValueError(f"coefficient {c} has no image in F_{p}")
            return v

        return evaluate_exppoly(poly, arrays, model.order, coef, p)
    return evaluate_exppoly(poly, arrays, model.order, complex)


def _symbol_choices(fam: SolutionFamily, model) -> List[Tuple[str, List[np.ndarray]]]:
    out = []
    if isinstance(model, PrimeFieldModel):
        adds = [np.array(a) for a in enumerate_additive(model.domain, model.field)]
        exps = [np.array(m) for m in enumerate_exponential(model.domain, model.field)]
    else:
        adds, exps = model.additive_maps(), model.exponentials()
    for p in fam.symbol_params:
        out.append((p.name, exps if p.kind == "exponentialSymbol" else adds))
    return out


def _poly_mod_p(expr: sp.Expr, names: Sequence[str], p: int):
    """Fast evaluator of a polynomial coefficient with rational coefficients mod p."""
    syms = [sp.Symbol(n) for n in names]
    poly = sp.Poly(sp.expand(expr), *syms) if syms else None
    if poly is None:
        val = sp.Rational(expr)
        const = int(val.p) * pow(int(val.q), -1, p) % p
        return lambda env: const
    terms = []
    for monom, c in poly.terms():
        c = sp.Rational(c)
        terms.append((monom, int(c.p) * pow(int(c.q), -1, p) % p))

    def ev(env):
        s = 0
        for monom, c in terms:
            t = c
            for v, e in zip(env, monom):
                t = t * pow(v, e, p)
            s += t
        return s % p

    return ev


def _match_prime(tables, fam: SolutionFamily, model: PrimeFieldModel) -> bool:
    p = model.p
    f_tab = np.asarray(tables[0]) % p
    a_tab = None if len(tables) < 2 else np.asarray(tables[1]) % p
    names = [q.name for q in fam.scalar_params]
    given = {q.name for q in fam.scalar_params if q.given}
    templates = [fam.template_f] + ([fam.template_alpha] if fam.template_alpha is not None and a_tab is not None else [])
    targets = [f_tab] + ([a_tab] if len(templates) > 1 else [])
    cons = [_poly_mod_p(e, names, p) for e in fam.constraints.equations]
    scalar_sets = []
    for n in names:
        if n in given:
            if model.alpha is None:
                raise ValueError(f"model lacks the given scalar {n}")
            scalar_sets.append([model.alpha % p])
        else:
            scalar_sets.append(range(p))
    envs = [env for env in itertools.product(*scalar_sets) if all(c(env) == 0 for c in cons)]
    compiled = []
    for t in templates:
        compiled.append([(mono, _poly_mod_p(sp.sympify(c), names, p)) for mono, c in t.items()])
    choices = _symbol_choices(fam, model)
    for combo in itertools.product(*[c[1] for c in choices]):
        inst = {name: arr for (name, _), arr in zip(choices, combo)}
        arrays = _symbol_arrays(model, inst)
        bases = []
        for t, comp in zip(templates, compiled):
            rows = []
            for mono, cf in comp:
                unit = ExpPoly(t.table, {mono: 1})
                rows.append((cf, evaluate_exppoly(unit, arrays, model.order, lambda c: 1, p)))
            bases.append(rows)
        for env in envs:
            ok = True
            for rows, target in zip(bases, targets):
                acc = np.zeros(model.order, dtype=np.int64)
                for cf, basis in rows:
                    acc = (acc + cf(env) * basis) % p
                if not np.array_equal(acc, target):
                    ok = False
                    break
            if ok:
                return True
    return False


def _rationalize(z: complex) -> GaussianRational:
    return GaussianRational(Fraction(z.real).limit_denominator(10**6), Fraction(z.imag).limit_denominator(10**6))


def _match_characters(tables, fam: SolutionFamily, model: CharacterModel) -> bool:
    f_tab = np.asarray(tables[0], dtype=complex)
    a_tab = None if len(tables) < 2 else np.asarray(tables[1], dtype=complex)
    choices = _symbol_choices(fam, model)
    for combo in itertools.product(*[c[1] for c in choices]):
        inst = {name: arr for (name, _), arr in zip(choices, combo)}
        arrays = _symbol_arrays(model, inst)
        fitted = []
        for tmpl, target in ((fam.template_f, f_tab), (fam.template_alpha, a_tab)):
            if tmpl is None or target is None:
                fitted.append(None)
                continue
            monos = tmpl.monomials()
            cols = [evaluate_exppoly(ExpPoly(tmpl.table, {m: 1}), arrays, model.order, complex) for m in monos]
            A = np.stack(cols, axis=1) if cols else np.zeros((model.order, 0))
            coef = np.linalg.lstsq(A, target, rcond=None)[0] if cols else np.zeros(0)
            if cols and np.max(np.abs(A @ coef - target)) > TOLERANCE:
                fitted.append(False)
                continue
            fitted.append(ExpPoly(tmpl.table, {m: _rationalize(c) for m, c in zip(monos, coef) if abs(c) > TOLERANCE}))
        if any(x is False for x in fitted):
            continue
        f_poly, a_poly = fitted
        vals = check_membership(f_poly, a_poly, fam)
        if vals is None:
            continue
        rf, ra = realize(fam, vals)
        ren = {k: v for k, v in vals.items() if isinstance(v, str)}
        inst2 = {ren.get(k, k): v for k, v in inst.items()}
        ok = np.max(np.abs(instantiate(rf, model, inst2) - f_tab)) <= TOLERANCE
        if ra is not None and a_tab is not None:
            ok = ok and np.max(np.abs(instantiate(ra, model, inst2) - a_tab)) <= TOLERANCE
        if ok:
            return True
    return False


def match_family(tables: Sequence, fam: SolutionFamily, model: Union[PrimeFieldModel, CharacterModel]) -> bool:
    """True iff some instantiation of the family reproduces the tables.

    Prime-field models are matched exactly; character models numerically
    (tolerance 1e-9), so their verdicts are evidence rather than proof.
    """
    if isinstance(model, CharacterModel):
        return _match_characters(tables, fam, model)
    return _match_prime(tables, fam, model)


def family_tables(fam: SolutionFamily, f: ExpPoly, a: Optional[ExpPoly], model, inst) -> Tuple[np.ndarray, ...]:
    out = (instantiate(f, model, inst),)
    if a is not None:
        out += (instantiate(a, model, inst),)
    return out
