"""Exact rank over Q(i) for collections of exponential polynomials."""
from __future__ import annotations

from typing import List, Sequence

from .poly import ExpPoly, SymbolTableMismatch
from .scalar import GaussianRational, as_scalar

__all__ = ["rank", "linearly_independent", "matrix_rank"]


def matrix_rank(rows: Sequence[Sequence]) -> int:
    """Row-reduce a dense matrix of exact scalars and return its rank."""
    m: List[List[GaussianRational]] = [[as_scalar(v) for v in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                k = m[i][col]
                m[i] = [a - k * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def rank(polys: Sequence[ExpPoly]) -> int:
    if not polys:
        return 0
    table = polys[0].table
    if any(p.table != table for p in polys):
        raise SymbolTableMismatch("exponential polynomials use different symbol tables")
    if any(p.is_symbolic() for p in polys):
        raise TypeError("rank needs numeric coefficients")
    monos = sorted({m for p in polys for m in p.monomials()})
    return matrix_rank([[p.coefficient(mo) for mo in monos] for p in polys])


def linearly_independent(polys: Sequence[ExpPoly]) -> bool:
    """True iff the polynomials are linearly independent over Q(i).

    Distinct formal symbols are treated as independent functions.
    """
    return rank(polys) == len(polys)
