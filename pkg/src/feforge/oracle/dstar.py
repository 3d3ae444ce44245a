"""Prime-field model of a group with an absorbing zero adjoined.

The group Z_p x Z_(p-1) carries a non-trivial additive map into F_p
(projection onto the first factor) and a non-trivial exponential
(g^(second factor) for a generator g of F_p^x).  Adjoining 0 and extending
both maps by 0 mimics a multiplicative domain that contains zero.
"""
from __future__ import annotations

from typing import Dict, Tuple

import numpy as np

from .enumerate import PrimeFieldModel
from .models import FiniteGroup, PrimeField, adjoin_zero

__all__ = ["dstar_prime_model"]


def dstar_prime_model(p: int) -> Tuple[PrimeFieldModel, Dict[str, np.ndarray]]:
    """Model plus an instantiation {a1: additive map, m1: exponential}, both 0 at the adjoined zero."""
    F = PrimeField(p)
    G = FiniteGroup([p, p - 1])
    digits = np.array([G.decode(x) for x in range(G.order)])
    ell = digits[:, 0] % p
    g = F.generator()
    m = np.array([pow(g, int(k), p) for k in digits[:, 1]], dtype=np.int64)
    D = adjoin_zero(G)
    inst = {"a1": np.concatenate([ell, [0]]), "m1": np.concatenate([m, [0]])}
    return PrimeFieldModel(D, F), inst
