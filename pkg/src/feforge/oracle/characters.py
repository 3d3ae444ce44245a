"""Characters of Z_n as exact exponent vectors, optionally extended by an absorbing zero."""
from __future__ import annotations

from typing import List, Optional

import numpy as np

from .models import FiniteDomain

__all__ = ["CharacterModel", "TOLERANCE"]

TOLERANCE = 1e-9
ZERO_EXP = -1  # exponent marker for the value 0


class CharacterModel:
    """Z_n into the complex numbers; chi_k(x) = w^(k x) with w = exp(2 pi i / n).

    Characters are stored exactly as integer exponent vectors (multiplication
    is exponent addition mod n).  Comparisons of linear combinations happen
    in floating point with tolerance ``TOLERANCE``; such verdicts are flagged
    non-exact.  With ``with_zero`` an absorbing 0 is adjoined and every
    non-trivial character is extended by chi(0) = 0.
    """

    exact = False

    def __init__(self, n: int, with_zero: bool = False):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.with_zero = with_zero
        size = n + (1 if with_zero else 0)
        x = np.arange(n)
        table = np.full((size, size), n, dtype=np.int64)
        table[:n, :n] = (x[:, None] + x[None, :]) % n
        labels = [str(v) for v in x] + (["0*"] if with_zero else [])
        self.domain = FiniteDomain(
            f"Z{n}" + ("+{0}" if with_zero else ""), table, 0, labels, zero=n if with_zero else None, additive=not with_zero
        )

    @property
    def order(self) -> int:
        return self.domain.order

    def exponents(self, k: int) -> np.ndarray:
        e = (k * np.arange(self.n)) % self.n
        if self.with_zero:
            e = np.concatenate([e, [0 if k % self.n == 0 else ZERO_EXP]])
        return e

    def multiply(self, e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
        out = (e1 + e2) % self.n
        out[(e1 == ZERO_EXP) | (e2 == ZERO_EXP)] = ZERO_EXP
        return out

    def values(self, exps: np.ndarray) -> np.ndarray:
        w = np.exp(2j * np.pi * np.asarray(exps) / self.n)
        return np.where(np.asarray(exps) == ZERO_EXP, 0, w)

    def character(self, k: int) -> np.ndarray:
        return self.values(self.exponents(k))

    def exponentials(self) -> List[np.ndarray]:
        """All exponentials: the n characters and the zero map."""
        return [self.character(k) for k in range(self.n)] + [np.zeros(self.order, dtype=complex)]

    def additive_maps(self) -> List[np.ndarray]:
        """Z_n has only the zero additive map into C."""
        return [np.zeros(self.order, dtype=complex)]

    def is_exponential(self, m: np.ndarray) -> bool:
        t = self.domain.table
        return bool(np.all(np.abs(m[t] - m[:, None] * m[None, :]) <= TOLERANCE))
