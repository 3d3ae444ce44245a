"""Regular real solutions: closed forms, pointwise evaluation and residuals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple, Union

import numpy as np

__all__ = [
    "RegularFamily",
    "DomainViolation",
    "eval_regular",
    "residual_max",
    "random_pairs",
    "VARIANTS",
    "MULT_FORMS",
]

VARIANTS = ("AddExp", "AddConst", "AddQuad", "MultLog")
MULT_FORMS = ("zero", "abs", "sign")


class DomainViolation(ValueError):
    pass


@dataclass(frozen=True)
class RegularFamily:
    """Regular solution of f(x∘y) - f(x) - f(y) = alpha(x) alpha(y).

    AddExp    alpha(x) = alpha (e^(lam x) - 1),   f(x) = gamma x + alpha^2 (e^(lam x) - 1)
    AddConst  alpha(x) = -alpha,                  f(x) = gamma x - alpha^2
    AddQuad   alpha(x) = alpha x,                 f(x) = alpha^2 x^2 / 2 + gamma x
    MultLog   alpha(x) = alpha (m(x) - 1),        f(x) = gamma ln|x| + alpha^2 (m(x) - 1)
              with m = 0, |x|^mu or sign(x) |x|^mu (``form``)

    The first three live on the real line under addition; MultLog lives on
    the nonzero reals under multiplication.
    """

    variant: str
    alpha: float = 0.0
    gamma: float = 0.0
    lam: float = 0.0
    mu: float = 0.0
    form: str = "abs"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.form not in MULT_FORMS:
            raise ValueError(f"unknown form {self.form!r}")

    @property
    def op(self) -> str:
        return "mul" if self.variant == "MultLog" else "add"

    def params(self) -> dict:
        if self.variant == "AddExp":
            return {"alpha": self.alpha, "gamma": self.gamma, "lambda": self.lam}
        if self.variant == "MultLog":
            return {"alpha": self.alpha, "gamma": self.gamma, "mu": self.mu, "form": self.form}
        return {"alpha": self.alpha, "gamma": self.gamma}


def _m(fam: RegularFamily, x: np.ndarray) -> np.ndarray:
    if fam.form == "zero":
        return np.zeros_like(x)
    mag = np.abs(x) ** fam.mu
    return mag if fam.form == "abs" else np.sign(x) * mag


def eval_regular(fam: RegularFamily, x) -> Tuple[np.ndarray, np.ndarray]:
    """(f(x), alpha(x)) for scalars or arrays."""
    x = np.asarray(x, dtype=float)
    a, g = fam.alpha, fam.gamma
    if fam.variant == "AddExp":
        e = np.expm1(fam.lam * x)
        return g * x + a * a * e, a * e
    if fam.variant == "AddConst":
        return g * x - a * a + 0 * x, -a + 0 * x
    if fam.variant == "AddQuad":
        return 0.5 * a * a * x * x + g * x, a * x
    if np.any(x == 0):
        raise DomainViolation("MultLog is defined on the nonzero reals only")
    m = _m(fam, x)
    return g * np.log(np.abs(x)) + a * a * (m - 1), a * (m - 1)


def random_pairs(rng: np.random.Generator, n: int, lo: float = -5.0, hi: float = 5.0, nonzero: bool = False):
    x = rng.uniform(lo, hi, n)
    y = rng.uniform(lo, hi, n)
    if nonzero:
        x[x == 0] = 1.0
        y[y == 0] = 1.0
    return x, y


Fn = Callable[[np.ndarray], np.ndarray]


def residual_max(
    fn: Union[RegularFamily, Fn],
    shape: str,
    pairs: Tuple[Iterable[float], Iterable[float]],
    alpha_fn: Optional[Fn] = None,
    alpha: Optional[float] = None,
    op: Optional[str] = None,
    relative: bool = False,
) -> float:
    """max |lhs - rhs| over the grid pairs.

    ``shape`` is S2 (scalar ``alpha``), S6 or S9 (function ``alpha_fn``).
    With ``relative`` the maximum is divided by 1 + max|f| over the points used.
    """
    x = np.asarray(pairs[0], dtype=float)
    y = np.asarray(pairs[1], dtype=float)
    if isinstance(fn, RegularFamily):
        fam = fn
        op = op or fam.op
        f = lambda t: eval_regular(fam, t)[0]  # noqa: E731
        alpha_fn = lambda t: eval_regular(fam, t)[1]  # noqa: E731
    else:
        f = fn
        op = op or "add"
    xy = x + y if op == "add" else x * y
    fx, fy, fxy = f(x), f(y), f(xy)
    if shape == "S2":
        if alpha is None:
            raise ValueError("S2 needs the scalar alpha")
        res = fxy - fx - fy - alpha * x * y
    elif shape == "S6":
        res = fxy - fx - fy - alpha_fn(x) * alpha_fn(y)
    elif shape == "S9":
        res = fxy - fx * fy - alpha_fn(x) * alpha_fn(y)
    else:
        raise ValueError(f"no real-line residual for shape {shape}")
    worst = float(np.max(np.abs(res))) if res.size else 0.0
    if relative:
        scale = 1.0 + float(np.max(np.abs(np.concatenate([fx, fy, fxy]))))
        return worst / scale
    return worst
