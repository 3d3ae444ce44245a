"""Finite domains (cyclic products, prime-field monoids) and codomains."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "FiniteDomain",
    "FiniteGroup",
    "PrimeField",
    "CharacteristicTwoError",
    "additive_field_model",
    "multiplicative_model",
    "adjoin_zero",
    "generating_set",
    "MAX_GROUP_ORDER",
]

MAX_GROUP_ORDER = 4096


class CharacteristicTwoError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def require_half(self):
        if self.p == 2:
            raise CharacteristicTwoError("characteristic 2: 1/2 does not exist in F_2")

    def inv(self, a: int) -> int:
        return pow(int(a) % self.p, -1, self.p)

    def sqrt_minus_one(self) -> Optional[int]:
        roots = [r for r in range(self.p) if (r * r + 1) % self.p == 0]
        return roots[0] if roots else None

    def generator(self) -> int:
        """Smallest generator of the multiplicative group."""
        if self.p == 2:
            return 1
        n = self.p - 1
        primes = [q for q in range(2, n + 1) if n % q == 0 and _is_prime(q)]
        for g in range(2, self.p):
            if all(pow(g, n // q, self.p) != 1 for q in primes):
                return g
        raise AssertionError("no generator")

    def __str__(self):
        return f"F{self.p}"


class FiniteDomain:
    """Finite commutative monoid given by its operation table.

    ``embed`` maps elements into a prime field when the domain sits inside
    it; ``field_mul`` is the field product table for an additively written
    field domain.  ``zero`` marks an absorbing element.
    """

    def __init__(
        self,
        name: str,
        table: np.ndarray,
        identity: Optional[int],
        labels: Sequence[str],
        embed: Optional[np.ndarray] = None,
        field_mul: Optional[np.ndarray] = None,
        zero: Optional[int] = None,
        additive: bool = True,
    ):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("operation table must be square")
        if n > MAX_GROUP_ORDER:
            raise ValueError(f"domain order {n} exceeds {MAX_GROUP_ORDER}")
        self.name = name
        self.table = table
        self.identity = identity
        self.labels = list(labels)
        self.embed = None if embed is None else np.asarray(embed, dtype=np.int64)
        self.field_mul = None if field_mul is None else np.asarray(field_mul, dtype=np.int64)
        self.zero = zero
        self.additive = additive

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def op(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def is_associative(self) -> bool:
        return _assoc(self.table)

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __repr__(self):
        return f"FiniteDomain({self.name}, order={self.order})"


def _assoc(t: np.ndarray) -> bool:
    n = t.shape[0]
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    return bool(np.array_equal(t[t[x, y], z], t[x, t[y, z]]))


class FiniteGroup(FiniteDomain):
    """Z_{n1} x ... x Z_{nk}, written additively; elements are mixed-radix indices."""

    def __init__(self, moduli: Sequence[int]):
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise ValueError("moduli must be positive")
        n = int(np.prod(moduli))
        if n > MAX_GROUP_ORDER:
            raise ValueError(f"group order {n} exceeds {MAX_GROUP_ORDER}")
        self.moduli = moduli
        digits = self._decode(np.arange(n))
        summed = (digits[:, None, :] + digits[None, :, :]) % np.array(moduli)
        table = self._encode(summed)
        labels = [str(int(d[0])) if len(moduli) == 1 else "(" + ",".join(str(int(v)) for v in d) + ")" for d in digits]
        name = "x".join(f"Z{m}" for m in moduli)
        super().__init__(name, table, 0, labels, additive=True)

    def _decode(self, idx: np.ndarray) -> np.ndarray:
        out = []
        rest = np.asarray(idx)
        for m in reversed(self.moduli):
            out.append(rest % m)
            rest = rest // m
        return np.stack(out[::-1], axis=-1)

    def _encode(self, digits: np.ndarray) -> np.ndarray:
        idx = np.zeros(digits.shape[:-1], dtype=np.int64)
        for k, m in enumerate(self.moduli):
            idx = idx * m + digits[..., k]
        return idx

    def decode(self, x: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in self._decode(np.array([x]))[0])

    def encode(self, digits: Sequence[int]) -> int:
        return int(self._encode(np.array([digits]))[0])



def additive_field_model(p: int) -> FiniteDomain:
    """(F_p, +) with the field product available for mixed-operation shapes."""
    F = PrimeField(p)
    x = np.arange(p)
    table = (x[:, None] + x[None, :]) % p
    mul = (x[:, None] * x[None, :]) % p
    return FiniteDomain(f"(F{p},+)", table, 0, [str(v) for v in x], embed=x, field_mul=mul, additive=True)


def multiplicative_model(p: int, with_zero: bool = False) -> FiniteDomain:
    """(F_p^x, *) or (F_p, *); elements indexed by field value (offset by one without zero)."""
    PrimeField(p)
    values = np.arange(0 if with_zero else 1, p)
    index = {int(v): i for i, v in enumerate(values)}
    table = np.array([[index[int(a * b % p)] for b in values] for a in values], dtype=np.int64)
    name = f"(F{p},*)" if with_zero else f"(F{p}^x,*)"
    return FiniteDomain(
        name, table, index[1], [str(v) for v in values], embed=values,
        zero=index[0] if with_zero else None, additive=False,
    )


def adjoin_zero(domain: FiniteDomain) -> FiniteDomain:
    """Adjoin an absorbing element 0 (new last index)."""
    n = domain.order
    table = np.full((n + 1, n + 1), n, dtype=np.int64)
    table[:n, :n] = domain.table
    embed = None
    if domain.embed is not None:
        embed = np.concatenate([domain.embed, [0]])
    return FiniteDomain(
        domain.name + "+{0}", table, domain.identity, domain.labels + ["0"], embed=embed, zero=n, additive=False
    )


def generating_set(domain: FiniteDomain) -> List[int]:
    """Greedy generators: repeatedly add the smallest element not yet generated."""
    n = domain.order
    gens: List[int] = []
    start = [domain.identity] if domain.identity is not None else []
    reached = np.zeros(n, dtype=bool)

    def closure():
        seen = np.zeros(n, dtype=bool)
        frontier = list(start) + list(gens)
        for v in frontier:
            seen[v] = True
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = domain.table[x, g]
                    if not seen[y]:
                        seen[y] = True
                        nxt.append(int(y))
            frontier = nxt
        return seen

    reached = closure()
    while not reached.all():
        gens.append(int(np.flatnonzero(~reached)[0]))
        reached = closure()
    return gens
