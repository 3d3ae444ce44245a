"""Exhaustive and propagated enumeration of solutions over finite models."""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..eqdsl import ShapeId
from .models import FiniteDomain, PrimeField, generating_set

__all__ = [
    "PrimeFieldModel",
    "SearchSpaceExceeded",
    "enumerate_additive",
    "enumerate_exponential",
    "enumerate_solutions",
    "pointwise_residual",
    "verify_solution",
    "cocycle_check",
    "cauchy_difference",
    "default_bound",
    "UNKNOWN_COUNT",
]

DEFAULT_BOUND = 10**7
ADDITIVE_TYPE = {ShapeId.S1, ShapeId.S2, ShapeId.S3, ShapeId.S4, ShapeId.S5, ShapeId.S6}
UNKNOWN_COUNT = {s: 1 if s in (ShapeId.S1, ShapeId.S2, ShapeId.S3) else 2 for s in ShapeId}


class SearchSpaceExceeded(RuntimeError):
    pass


def default_bound() -> int:
    env = os.environ.get("FEFORGE_MAX_SPACE")
    return int(float(env)) if env else DEFAULT_BOUND


@dataclass
class PrimeFieldModel:
    """A finite domain mapped into F_p, with the given data of the equation."""

    domain: FiniteDomain
    field: PrimeField
    B: Optional[np.ndarray] = None
    alpha: Optional[int] = None

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def order(self) -> int:
        return self.domain.order


def _propagate(domain: FiniteDomain, gens: List[int], images, p: int, multiplicative: bool):
    n = domain.order
    vals = np.full(n, -1, dtype=np.int64)
    vals[domain.identity] = 1 if multiplicative else 0
    frontier = [domain.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, vg in zip(gens, images):
                y = domain.table[x, g]
                v = (vals[x] * vg) % p if multiplicative else (vals[x] + vg) % p
                if vals[y] < 0:
                    vals[y] = v
                    nxt.append(int(y))
                elif vals[y] != v:
                    return None
        frontier = nxt
    for g, vg in zip(gens, images):
        if vals[g] != vg % p:
            return None
    return vals


def _homs(domain: FiniteDomain, field: PrimeField, multiplicative: bool) -> List[Tuple[int, ...]]:
    if domain.identity is None:
        raise ValueError("homomorphism enumeration needs a neutral element")
    gens = generating_set(domain)
    out = set()
    for images in itertools.product(range(field.p), repeat=len(gens)):
        vals = _propagate(domain, gens, images, field.p, multiplicative)
        if vals is not None:
            out.add(tuple(int(v) for v in vals))
    if multiplicative:
        out.add(tuple([0] * domain.order))
    return sorted(out)


def enumerate_additive(domain: FiniteDomain, field: PrimeField) -> List[Tuple[int, ...]]:
    """All maps a with a(x∘y) = a(x) + a(y), sorted."""
    return _homs(domain, field, multiplicative=False)


def enumerate_exponential(domain: FiniteDomain, field: PrimeField) -> List[Tuple[int, ...]]:
    """All maps m with m(x∘y) = m(x) m(y), including the zero map, sorted."""
    return _homs(domain, field, multiplicative=True)


# pointwise equations --------------------------------------------------------------


def _perturbation(shape: ShapeId, model: PrimeFieldModel, a):
    d, p = model.domain, model.p
    if shape == ShapeId.S1:
        if model.B is None:
            raise ValueError("S1 needs the table B")
        return model.B
    if shape in (ShapeId.S2, ShapeId.S3):
        if d.embed is None or model.alpha is None:
            raise ValueError(f"{shape.value} needs an embedded domain and the scalar alpha")
        e = d.embed
        return (model.alpha * ((e[:, None] * e[None, :]) % p)) % p
    if shape in (ShapeId.S4, ShapeId.S7, ShapeId.S8):
        return a[..., d.table]
    if shape == ShapeId.S5:
        if d.field_mul is None:
            raise ValueError("S5 needs the field product on the domain")
        return a[..., d.field_mul]
    if shape in (ShapeId.S6, ShapeId.S9):
        return (a[..., :, None] * a[..., None, :]) % p
    raise ValueError(f"no finite-model equation for {shape}")


def pointwise_residual(shape: ShapeId, model: PrimeFieldModel, f, a=None) -> np.ndarray:
    """(lhs - rhs)(x, y) mod p; leading batch dimensions are allowed."""
    shape = ShapeId(shape)
    f = np.asarray(f, dtype=np.int64)
    a = None if a is None else np.asarray(a, dtype=np.int64)
    p, t = model.p, model.domain.table
    fxy = f[..., t]
    if shape in ADDITIVE_TYPE:
        c = fxy - f[..., :, None] - f[..., None, :]
    else:
        c = fxy - (f[..., :, None] * f[..., None, :]) % p
    return (c - _perturbation(shape, model, a)) % p


def verify_solution(shape: ShapeId, model: PrimeFieldModel, f, a=None) -> bool:
    """Independent scalar re-check of every pair (no vectorization)."""
    shape = ShapeId(shape)
    d, p = model.domain, model.p
    n = d.order
    for x in range(n):
        for y in range(n):
            xy = d.op(x, y)
            if shape in ADDITIVE_TYPE:
                lhs = f[xy] - f[x] - f[y]
            else:
                lhs = f[xy] - f[x] * f[y]
            if shape == ShapeId.S1:
                rhs = int(model.B[x, y])
            elif shape in (ShapeId.S2, ShapeId.S3):
                rhs = model.alpha * int(d.embed[x]) * int(d.embed[y])
            elif shape in (ShapeId.S4, ShapeId.S7, ShapeId.S8):
                rhs = a[xy]
            elif shape == ShapeId.S5:
                rhs = a[int(d.field_mul[x, y])]
            else:
                rhs = a[x] * a[y]
            if (lhs - rhs) % p:
                return False
    return True


def _raw(shape, model, unknowns, bound):
    n, p = model.order, model.p
    width = unknowns * n
    total = p**width
    chunk = max(1, 2_000_000 // (n * n))
    powers = p ** np.arange(width - 1, -1, -1, dtype=np.int64)
    found = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % p
        f = digits[:, :n]
        a = digits[:, n:] if unknowns == 2 else None
        res = pointwise_residual(shape, model, f, a)
        ok = ~res.reshape(len(idx), -1).any(axis=1)
        for k in np.flatnonzero(ok):
            found.append(digits[k])
    return found


def _structured(shape, model, unknowns):
    """f propagated from its values on generators (and the identity); alpha exhaustive."""
    d, n, p = model.domain, model.order, model.p
    gens = generating_set(d)
    seeds = ([d.identity] if d.identity is not None else []) + gens
    additive = shape in ADDITIVE_TYPE
    alphas = itertools.product(range(p), repeat=n) if unknowns == 2 else [None]
    found = []
    for a in alphas:
        a_arr = None if a is None else np.array(a, dtype=np.int64)
        pert = _perturbation(shape, model, a_arr)
        for images in itertools.product(range(p), repeat=len(seeds)):
            f = np.full(n, -1, dtype=np.int64)
            for s, v in zip(seeds, images):
                if f[s] >= 0 and f[s] != v:
                    break
                f[s] = v
            else:
                frontier = list(dict.fromkeys(seeds))
                bad = False
                while frontier and not bad:
                    nxt = []
                    for x in frontier:
                        for g in gens:
                            y = d.table[x, g]
                            base = f[x] + f[g] if additive else f[x] * f[g]
                            v = (base + pert[x, g]) % p
                            if f[y] < 0:
                                f[y] = v
                                nxt.append(int(y))
                            elif f[y] != v:
                                bad = True
                                break
                        if bad:
                            break
                    frontier = nxt
                if bad or (f < 0).any():
                    continue
                if not pointwise_residual(shape, model, f, a_arr).any():
                    found.append(np.concatenate([f, a_arr]) if a_arr is not None else f.copy())
    return found


def enumerate_solutions(
    shape: ShapeId, model: PrimeFieldModel, bound: Optional[int] = None, method: str = "auto"
) -> List[Tuple[Tuple[int, ...], ...]]:
    """Every (f,) or (f, alpha) table solving the equation on the model, sorted.

    Raw exhaustion is used while p^(unknowns*|G|) fits the bound; otherwise f
    is propagated along generators.  Each result is re-verified pair by pair.
    """
    shape = ShapeId(shape)
    if shape in (ShapeId.OpenProblemMixed, ShapeId.Unrecognized):
        raise ValueError(f"{shape.value} has no finite-model enumeration")
    if shape in (ShapeId.S1, ShapeId.S2, ShapeId.S5):
        model.field.require_half()
    bound = default_bound() if bound is None else bound
    unknowns = UNKNOWN_COUNT[shape]
    n, p = model.order, model.p
    raw_space = p ** (unknowns * n)
    structured_space = p ** (n * (unknowns - 1)) * p ** (len(generating_set(model.domain)) + 1)
    if method == "raw" or (method == "auto" and raw_space <= bound):
        rows = _raw(shape, model, unknowns, bound)
    elif method in ("auto", "structured") and structured_space <= bound:
        rows = _structured(shape, model, unknowns)
    else:
        raise SearchSpaceExceeded(
            f"search space {p}^{unknowns * n} exceeds the bound {bound} and structured search needs {structured_space}"
        )
    out = set()
    for r in rows:
        f = tuple(int(v) for v in r[:n])
        a = tuple(int(v) for v in r[n:]) if unknowns == 2 else None
        if not verify_solution(shape, model, f, a):
            raise AssertionError("enumerated tuple fails the independent re-check")
        out.add((f,) if a is None else (f, a))
    return sorted(out)


# cocycles ------------------------------------------------------------------------------


def cauchy_difference(domain: FiniteDomain, f, p: int) -> np.ndarray:
    f = np.asarray(f, dtype=np.int64)
    return (f[domain.table] - f[:, None] - f[None, :]) % p


def cocycle_check(C, domain: FiniteDomain, p: Optional[int] = None) -> bool:
    """C(x,y) + C(x∘y,z) == C(x,y∘z) + C(y,z) for every triple."""
    C = np.asarray(C)
    t = domain.table
    n = domain.order
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    lhs = C[x, y] + C[t[x, y], z]
    rhs = C[x, t[y, z]] + C[y, z]
    diff = lhs - rhs
    if p is not None:
        return not (diff % p).any()
    if np.iscomplexobj(diff) or np.issubdtype(diff.dtype, np.floating):
        return bool(np.all(np.abs(diff) <= 1e-9))
    return not diff.any()
