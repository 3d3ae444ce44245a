"""Sample sets and parameter recovery for the regular families."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .regular import RegularFamily, eval_regular

__all__ = [
    "SampleSet",
    "SampleError",
    "FitResult",
    "generate_samples",
    "read_samples_csv",
    "write_samples_csv",
    "fit_regular",
    "IDENTIFIABILITY_EPS",
    "FIT_VARIANTS",
]

IDENTIFIABILITY_EPS = 1e-10
FIT_VARIANTS = ("auto", "AddExp", "AddConst", "AddQuad", "MultLog", "Additive")
CSV_HEADER = ("x", "f", "alpha")


class SampleError(ValueError):
    pass


@dataclass(frozen=True)
class SampleSet:
    x: np.ndarray
    f: np.ndarray
    alpha: np.ndarray
    noise: Optional[float] = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).ravel()
        f = np.asarray(self.f, dtype=float).ravel()
        a = np.asarray(self.alpha, dtype=float).ravel()
        if not (len(x) == len(f) == len(a)):
            raise SampleError("x, f and alpha must have the same length")
        if len(x) == 0:
            raise SampleError("empty sample set")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(f)) and np.all(np.isfinite(a))):
            raise SampleError("samples must be finite")
        if len(np.unique(x)) != len(x):
            raise SampleError("sample x values must be distinct")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "alpha", a)

    def __len__(self):
        return len(self.x)

    def subset(self, idx) -> "SampleSet":
        return SampleSet(self.x[idx], self.f[idx], self.alpha[idx], self.noise)


@dataclass
class FitResult:
    variant: str
    params: Dict[str, object]
    residual: float
    converged: bool
    iterations: int
    n_fit: int
    n_validation: int
    rms: float = 0.0
    message: str = ""
    family: Optional[RegularFamily] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "params": {k: (_round(v) if isinstance(v, float) else v) for k, v in self.params.items()},
            "validation_residual": _round(self.residual),
            "fit_rms": _round(self.rms),
            "converged": self.converged,
            "iterations": self.iterations,
            "n_fit": self.n_fit,
            "n_validation": self.n_validation,
            "message": self.message,
        }


def _round(v: float) -> float:
    # 12 significant digits keeps reports stable across BLAS builds
    return float(f"{v:.12g}")


# -- sample I/O ----------------------------------------------------------------


def generate_samples(
    fam: RegularFamily,
    n: int = 50,
    seed: int = 0,
    lo: float = -2.0,
    hi: float = 2.0,
    noise: float = 0.0,
) -> SampleSet:
    """Draw ``n`` distinct abscissae and evaluate the family, optionally with Gaussian noise."""
    rng = np.random.default_rng(seed)
    if fam.variant == "MultLog":
        mag = rng.uniform(max(lo, 0.0) or 0.2, hi if hi > 0 else 2.0, n)
        x = mag * rng.choice([-1.0, 1.0], n)
    else:
        x = rng.uniform(lo, hi, n)
    x = np.unique(x)
    while len(x) < n:  # astronomically unlikely; keep the contract anyway
        x = np.unique(np.concatenate([x, rng.uniform(lo, hi, n - len(x))]))
    rng.shuffle(x)
    f, a = eval_regular(fam, x)
    if noise:
        f = f + rng.normal(0.0, noise, n)
        a = a + rng.normal(0.0, noise, n)
    return SampleSet(x, f, a, noise or None)


def read_samples_csv(path) -> SampleSet:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SampleError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise SampleError("empty CSV")
    header = tuple(c.strip() for c in rows[0])
    if header != CSV_HEADER:
        raise SampleError(f"expected header x,f,alpha, got {','.join(header)}")
    vals = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise SampleError(f"line {lineno}: expected 3 fields, got {len(row)}")
        try:
            vals.append([float(c) for c in row])
        except ValueError as exc:
            raise SampleError(f"line {lineno}: {exc}") from exc
    if not vals:
        raise SampleError("CSV has a header but no samples")
    arr = np.array(vals)
    return SampleSet(arr[:, 0], arr[:, 1], arr[:, 2])


def write_samples_csv(samples: SampleSet, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for row in zip(samples.x, samples.f, samples.alpha):
            w.writerow([repr(float(v)) for v in row])


# -- models ----------------------------------------------------------------------
#
# Each model maps (params, x) to (f_hat, alpha_hat, J) where J stacks the
# Jacobians of f_hat and alpha_hat, shape (2n, k).

Model = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray]]


def _exp_model(t: np.ndarray, s: np.ndarray) -> Model:
    # alpha(x) = a (s e^{l t} - 1), f(x) = g t + a^2 (s e^{l t} - 1)
    def model(p, _x=None):
        a, g, lam = p
        ex = s * np.exp(lam * t)
        e = ex - 1.0
        fh = g * t + a * a * e
        ah = a * e
        jf = np.column_stack([2 * a * e, t, a * a * t * ex])
        ja = np.column_stack([e, np.zeros_like(t), a * t * ex])
        return fh, ah, np.vstack([jf, ja])

    return model


def _const_model(t: np.ndarray) -> Model:
    def model(p, _x=None):
        a, g = p
        fh = g * t - a * a
        ah = -a + 0 * t
        jf = np.column_stack([-2 * a + 0 * t, t])
        ja = np.column_stack([-np.ones_like(t), np.zeros_like(t)])
        return fh, ah, np.vstack([jf, ja])

    return model


def _quad_model(x: np.ndarray) -> Model:
    def model(p, _x=None):
        a, g = p
        fh = 0.5 * a * a * x * x + g * x
        ah = a * x
        jf = np.column_stack([a * x * x, x])
        ja = np.column_stack([x, np.zeros_like(x)])
        return fh, ah, np.vstack([jf, ja])

    return model


def _levenberg_marquardt(model: Model, p0, f, a, max_iter: int = 200, tol: float = 1e-14):
    """Damped Gauss-Newton; returns (params, converged, iterations)."""
    p = np.array(p0, dtype=float)
    y = np.concatenate([f, a])

    def cost_of(q):
        fh, ah, _ = model(q)
        r = np.concatenate([fh, ah]) - y
        return float(r @ r)

    mu = 1e-3
    fh, ah, J = model(p)
    r = np.concatenate([fh, ah]) - y
    cost = float(r @ r)
    for it in range(1, max_iter + 1):
        g = J.T @ r
        H = J.T @ J
        if not np.all(np.isfinite(H)):
            return p, False, it
        step = None
        while mu < 1e16:
            A = H + mu * np.diag(np.maximum(np.diag(H), 1e-12))
            try:
                cand = np.linalg.solve(A, -g)
            except np.linalg.LinAlgError:
                mu *= 10
                continue
            new_cost = cost_of(p + cand)
            if np.isfinite(new_cost) and new_cost <= cost:
                step = cand
                break
            mu *= 10
        if step is None:
            # no descent direction left: we are at a (numerical) minimum
            return p, True, it
        p = p + step
        small_step = np.linalg.norm(step) <= tol * (1 + np.linalg.norm(p)) + 1e-300
        small_gain = cost - new_cost <= tol * max(cost, 1e-300)
        cost = new_cost
        mu = max(mu / 10, 1e-12)
        fh, ah, J = model(p)
        r = np.concatenate([fh, ah]) - y
        if small_step or small_gain or cost == 0.0:
            return p, True, it
    return p, False, max_iter


def _loglinear_rate(t: np.ndarray, a: np.ndarray) -> Optional[float]:
    """Rate l with a(t) ~ c (e^{l t} - 1), from log |da/dt| against midpoints."""
    order = np.argsort(t)
    t, a = t[order], a[order]
    dt = np.diff(t)
    keep = dt > 1e-9 * (1 + np.abs(t[1:]))
    if keep.sum() < 2:
        return None
    slope = np.diff(a)[keep] / dt[keep]
    mid = 0.5 * (t[1:] + t[:-1])[keep]
    ok = np.abs(slope) > 0
    if ok.sum() < 2:
        return None
    A = np.column_stack([mid[ok], np.ones(ok.sum())])
    coef, *_ = np.linalg.lstsq(A, np.log(np.abs(slope[ok])), rcond=None)
    return float(coef[0])


def _linear_init(t, s, lam, f, a):
    """(alpha, gamma) by linear least squares given the rate."""
    e = s * np.exp(lam * t) - 1.0
    den = float(e @ e)
    al = float(e @ a) / den if den > 0 else 0.0
    g = float(t @ (f - al * al * e)) / float(t @ t) if float(t @ t) > 0 else 0.0
    return al, g


# -- variant fitters --------------------------------------------------------------


@dataclass
class _Fit:
    variant: str
    params: Dict[str, object]
    model_family: Optional[RegularFamily]
    converged: bool
    iterations: int
    rms: float


def _rms(model, p, f, a) -> float:
    fh, ah, _ = model(p)
    r = np.concatenate([fh - f, ah - a])
    return float(np.sqrt(np.mean(r * r)))


def _fit_additive(s: SampleSet, log: bool = False) -> _Fit:
    t = np.log(np.abs(s.x)) if log else s.x
    g = float(t @ s.f) / float(t @ t)
    r = np.concatenate([g * t - s.f, s.alpha])
    fam = None if log else RegularFamily("AddExp", alpha=0.0, gamma=g, lam=0.0)
    if log:
        fam = RegularFamily("MultLog", alpha=0.0, gamma=g, mu=0.0, form="abs")
    return _Fit("Additive", {"gamma": g}, fam, True, 0, float(np.sqrt(np.mean(r * r))))


def _fit_const(s: SampleSet, max_iter: int, log: bool = False) -> _Fit:
    t = np.log(np.abs(s.x)) if log else s.x
    a0 = -float(np.mean(s.alpha))
    g0 = float(t @ (s.f + a0 * a0)) / float(t @ t)
    model = _const_model(t)
    p, conv, it = _levenberg_marquardt(model, [a0, g0], s.f, s.alpha, max_iter)
    a, g = (float(v) for v in p)
    if log:
        fam = RegularFamily("MultLog", alpha=a, gamma=g, form="zero")
        params = {"alpha": a, "gamma": g, "form": "zero"}
        variant = "MultLog"
    else:
        fam = RegularFamily("AddConst", alpha=a, gamma=g)
        params = {"alpha": a, "gamma": g}
        variant = "AddConst"
    return _Fit(variant, params, fam, conv, it, _rms(model, p, s.f, s.alpha))


def _fit_quad(s: SampleSet, max_iter: int) -> _Fit:
    x = s.x
    a0 = float(x @ s.alpha) / float(x @ x)
    g0 = float(x @ (s.f - 0.5 * a0 * a0 * x * x)) / float(x @ x)
    model = _quad_model(x)
    p, conv, it = _levenberg_marquardt(model, [a0, g0], s.f, s.alpha, max_iter)
    a, g = (float(v) for v in p)
    return _Fit("AddQuad", {"alpha": a, "gamma": g}, RegularFamily("AddQuad", alpha=a, gamma=g), conv, it,
                _rms(model, p, s.f, s.alpha))


def _fit_exp(s: SampleSet, max_iter: int) -> _Fit:
    t, ones = s.x, np.ones_like(s.x)
    lam0 = _loglinear_rate(t, s.alpha)
    if lam0 is None or not np.isfinite(lam0):
        lam0 = 0.0
    a0, g0 = _linear_init(t, ones, lam0, s.f, s.alpha)
    model = _exp_model(t, ones)
    p, conv, it = _levenberg_marquardt(model, [a0, g0, lam0], s.f, s.alpha, max_iter)
    a, g, lam = (float(v) for v in p)
    fam = RegularFamily("AddExp", alpha=a, gamma=g, lam=lam)
    return _Fit("AddExp", {"alpha": a, "gamma": g, "lambda": lam}, fam, conv, it, _rms(model, p, s.f, s.alpha))


def _fit_multlog(s: SampleSet, max_iter: int) -> _Fit:
    if np.any(s.x == 0):
        raise SampleError("MultLog samples must avoid x = 0")
    t = np.log(np.abs(s.x))
    sign = np.sign(s.x)
    pos = s.x > 0
    src = pos if pos.sum() >= 3 else np.ones_like(pos)
    mu0 = _loglinear_rate(t[src], s.alpha[src])
    if mu0 is None or not np.isfinite(mu0):
        mu0 = 0.0
    best = None
    for form, sf in (("abs", np.ones_like(t)), ("sign", sign)):
        a0, g0 = _linear_init(t[src], np.ones(src.sum()), mu0, s.f[src], s.alpha[src])
        model = _exp_model(t, sf)
        p, conv, it = _levenberg_marquardt(model, [a0, g0, mu0], s.f, s.alpha, max_iter)
        rms = _rms(model, p, s.f, s.alpha)
        if best is None or rms < best[0] * (1 - 1e-9):
            best = (rms, form, p, conv, it)
    for_zero = _fit_const(s, max_iter, log=True)
    rms, form, p, conv, it = best
    if for_zero.rms <= rms:
        return for_zero
    a, g, mu = (float(v) for v in p)
    fam = RegularFamily("MultLog", alpha=a, gamma=g, mu=mu, form=form)
    return _Fit("MultLog", {"alpha": a, "gamma": g, "mu": mu, "form": form}, fam, conv, it, rms)


def _collapse(fit: _Fit, s: SampleSet) -> _Fit:
    """Apply the identifiability rule to exponential-type fits."""
    if fit.variant not in ("AddExp", "MultLog") or fit.params.get("form") == "zero":
        return fit
    rate = fit.params.get("lambda", fit.params.get("mu"))
    if abs(fit.params["alpha"]) < IDENTIFIABILITY_EPS or abs(rate) < IDENTIFIABILITY_EPS:
        out = _fit_additive(s, log=fit.variant == "MultLog")
        out.iterations = fit.iterations
        out.converged = fit.converged
        return out
    return fit


def _auto(s: SampleSet, max_iter: int) -> _Fit:
    scale = 1.0 + float(np.max(np.abs(np.concatenate([s.f, s.alpha]))))
    if float(np.max(np.abs(s.alpha))) <= IDENTIFIABILITY_EPS * scale:
        return _fit_additive(s)
    cands = [_fit_const(s, max_iter), _fit_quad(s, max_iter), _collapse(_fit_exp(s, max_iter), s)]
    best = min(c.rms for c in cands)
    # simplest candidate that explains the data about as well as the best one
    for c in cands:
        if c.rms <= 2.0 * best + 1e-12 * scale:
            return c
    return cands[-1]


# -- public entry ------------------------------------------------------------------


def _validation_residual(fam: RegularFamily, val: SampleSet, op: str) -> float:
    """max |f_hat(x_i o x_j) - f_i - f_j - alpha_i alpha_j| over held-out pairs."""
    x, f, a = val.x, val.f, val.alpha
    if len(x) == 0:
        return 0.0
    i, j = np.meshgrid(np.arange(len(x)), np.arange(len(x)), indexing="ij")
    i, j = i.ravel(), j.ravel()
    xy = x[i] + x[j] if op == "add" else x[i] * x[j]
    ok = xy != 0 if fam.variant == "MultLog" else np.ones_like(xy, dtype=bool)
    fxy, _ = eval_regular(fam, xy[ok])
    r = fxy - f[i][ok] - f[j][ok] - a[i][ok] * a[j][ok]
    return float(np.max(np.abs(r))) if r.size else 0.0


_MIN_POINTS = {"Additive": 1, "AddConst": 2, "AddQuad": 2, "AddExp": 3, "MultLog": 3, "auto": 3}


def fit_regular(
    samples: SampleSet,
    variant: str = "auto",
    seed: int = 0,
    max_iter: int = 200,
    validation_fraction: float = 0.2,
) -> FitResult:
    """Recover family parameters from samples.

    The samples are split (seeded permutation) into a fitting part and a
    held-out part; the reported residual only uses held-out points.
    """
    if variant not in FIT_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {', '.join(FIT_VARIANTS)}")
    n = len(samples)
    if n < 2 or np.ptp(samples.x) == 0:
        raise SampleError("degenerate samples: need at least two distinct x values")
    perm = np.random.default_rng(seed).permutation(n)
    n_val = int(math.floor(validation_fraction * n))
    need = _MIN_POINTS[variant] + 1
    if n - n_val < need:
        raise SampleError(f"need at least {need} fitting points for {variant}, have {n - n_val}")
    fit_set = samples.subset(np.sort(perm[n_val:]))
    val_set = samples.subset(np.sort(perm[:n_val]))

    if variant == "auto":
        # real-line variants only; MultLog lives on another domain and must be asked for
        fit = _auto(fit_set, max_iter)
    elif variant == "Additive":
        fit = _fit_additive(fit_set)
    elif variant == "AddConst":
        fit = _fit_const(fit_set, max_iter)
    elif variant == "AddQuad":
        fit = _fit_quad(fit_set, max_iter)
    elif variant == "AddExp":
        fit = _collapse(_fit_exp(fit_set, max_iter), fit_set)
    else:
        fit = _collapse(_fit_multlog(fit_set, max_iter), fit_set)

    op = "mul" if fit.model_family is not None and fit.model_family.variant == "MultLog" else "add"
    resid = _validation_residual(fit.model_family, val_set, op)
    msg = "converged" if fit.converged else f"no convergence after {max_iter} iterations"
    if fit.variant == "Additive":
        msg += "; alpha vanishes, rate is not identifiable"
    return FitResult(
        variant=fit.variant,
        params=fit.params,
        residual=resid,
        converged=fit.converged,
        iterations=fit.iterations,
        n_fit=len(fit_set),
        n_validation=len(val_set),
        rms=fit.rms,
        message=msg,
        family=fit.model_family,
    )
