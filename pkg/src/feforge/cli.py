"""Command-line front end: ``feforge solve | oracle | fit | verify``.

Exit codes: 0 success, 1 bad input (parse error, malformed CSV, characteristic
2, unsupported model), 2 open mixed problem, 3 unrecognized shape, 4 oracle
search bound exceeded, 5 fit did not converge, 6 nonzero residual in verify.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
from typing import List, Optional, Tuple

import numpy as np

from . import __version__
from .eqdsl import DomainClass, DomainSpec, ParseError, ShapeId, classify, domain_from_flag, parse, render
from .eqdsl.classify import canonical_equation_text
from .eqdsl.domain import DOMAIN_FLAGS, Codomain
from .exppoly import ExpPolyError, as_scalar, parse_exppoly, residual, table_for
from .numeric import (
    FIT_VARIANTS,
    RegularFamily,
    SampleError,
    fit_regular,
    random_pairs,
    read_samples_csv,
    residual_max,
)
from .oracle import (
    CharacteristicTwoError,
    FiniteGroup,
    PrimeField,
    PrimeFieldModel,
    SearchSpaceExceeded,
    additive_field_model,
    adjoin_zero,
    enumerate_solutions,
    match_family,
    multiplicative_model,
)
from .solver import Unsupported, UnsupportedShapeError, real_admissible, realize, solve_shape
from .solver.sampling import sample_parameters

__all__ = ["main", "build_parser", "build_oracle_model", "EXIT"]

REPORT_VERSION = 1
EXIT = {
    "ok": 0,
    "input": 1,
    "open_problem": 2,
    "unrecognized": 3,
    "bound": 4,
    "no_convergence": 5,
    "nonzero_residual": 6,
}
MAX_LISTED = 64


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT["input"]):
        super().__init__(message)
        self.code = code


# -- reports ------------------------------------------------------------------------


def _report(command: str, **body) -> dict:
    out = {"report_version": REPORT_VERSION, "tool": "feforge", "version": __version__, "command": command}
    out.update(body)
    return out


def _text(value, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, list) and v and all(isinstance(u, int) and not isinstance(u, bool) for u in v):
                lines.append(f"{pad}{k}: [{', '.join(map(str, v))}]")
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict):
                sub = _text(v, indent + 1)
                lines.append(f"{pad}- {sub[0].strip()}")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return "none"
    return str(v)


def emit(report: dict, as_json: bool, stream=None) -> None:
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        stream.write("\n".join(_text(report)) + "\n")


# -- domains ------------------------------------------------------------------------


def _domain(flag: str, codomain: Optional[str], real: bool, text: Optional[str] = None) -> DomainSpec:
    cod = codomain or ("real" if real else "complex")
    op = None
    if text is not None and flag == "field":
        op = parse(text).domain.group_op
    try:
        return domain_from_flag(flag, cod, op)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


# -- solve --------------------------------------------------------------------------


def _family_entry(fam, real: bool) -> dict:
    entry = {
        "label": fam.label,
        "f": fam.template_f.dump(),
        "alpha": None if fam.template_alpha is None else fam.template_alpha.dump(),
        "parameters": [p.describe() for p in fam.params],
        "constraints": fam.constraints.render(),
        "branches": [str(b) if b.subs else "all parameters free" for b in fam.branches()],
        "notes": list(fam.notes),
    }
    if real:
        entry["real_forms"] = list(fam.real_forms)
    return entry


def _symbolic_check(fam, draws: int, rng: random.Random) -> dict:
    zero, failures = 0, []
    for _ in range(draws):
        try:
            vals = sample_parameters(fam, rng)
            realize(fam, {k: v for k, v in vals.items() if k in {p.name for p in fam.scalar_params}})
            zero += 1
        except Exception as exc:  # report, do not hide
            failures.append(f"{type(exc).__name__}: {exc}")
    return {"draws": draws, "zero_residual": zero, "failures": sorted(set(failures))}


def _numeric_check(shape: ShapeId, domain: DomainSpec, seed: int, instances: int = 10) -> Optional[dict]:
    if shape != ShapeId.S6 or domain.domain_class not in (DomainClass.RealLine, DomainClass.RealNonzero):
        return None
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(instances):
        a, g = rng.uniform(-3, 3, 2)
        rate = rng.uniform(-2, 2)
        if domain.domain_class == DomainClass.RealLine:
            fam = [RegularFamily("AddExp", a, g, lam=rate), RegularFamily("AddConst", a, g), RegularFamily("AddQuad", a, g)][k % 3]
            x, y = random_pairs(rng, 1000)
        else:
            fam = RegularFamily("MultLog", a, g, mu=rate, form=("abs", "sign", "zero")[k % 3])
            x, y = random_pairs(rng, 1000, 0.1, 3.0)
            x = x * rng.choice([-1.0, 1.0], len(x))
        worst = max(worst, residual_max(fam, "S6", (x, y), relative=True))
    return {"instances": instances, "pairs": 1000, "relative_residual_max": float(f"{worst:.3g}")}


def _oracle_summary(shape: ShapeId, domain: DomainSpec) -> Optional[dict]:
    if domain.is_real or domain.codomain == Codomain.Real:
        return None
    try:
        model, spec, desc = build_oracle_model(shape, "Z5", "F5", "product", 1, domain.has_zero)
        sols = enumerate_solutions(shape, model, method="structured")
        fams = solve_shape(shape, spec)
        matched = sum(1 for s in sols if any(match_family(s, f, model) for f in fams))
    except (CliError, SearchSpaceExceeded, UnsupportedShapeError, ValueError) as exc:
        return {"skipped": str(exc)}
    return {"model": desc, "count": len(sols), "matched": matched}


def cmd_solve(args) -> Tuple[dict, int]:
    try:
        domain = _domain(args.domain, args.codomain, args.real, args.equation)
        eq = parse(args.equation, domain)
    except ParseError as exc:
        raise CliError(f"parse error: {exc.message} at offset {exc.position}") from exc
    shape = classify(eq)
    head = {
        "equation": args.equation,
        "canonical": render(eq),
        "domain": eq.domain.describe(),
        "shape": shape.value,
    }
    if shape == ShapeId.Unrecognized:
        return _report("solve", status="unrecognized", **head, message="the equation matches no supported shape"), EXIT["unrecognized"]
    try:
        result = solve_shape(shape, eq.domain)
    except UnsupportedShapeError as exc:
        raise CliError(f"{shape.value} on {eq.domain.describe()}: {exc}") from exc
    if isinstance(result, Unsupported):
        return _report("solve", status="unsupported", **head, message=result.reason), EXIT["open_problem"]
    head["shape_equation"] = canonical_equation_text(shape, eq.domain.op_symbol or "+")
    fams = [real_admissible(f) for f in result] if args.real else result
    rng = random.Random(args.seed)
    verification = {
        "symbolic": {f.label: _symbolic_check(f, args.draws, rng) for f in fams},
        "oracle": _oracle_summary(shape, eq.domain),
        "numeric": _numeric_check(shape, eq.domain, args.seed),
    }
    rep = _report(
        "solve",
        status="solved",
        **head,
        real=bool(args.real),
        seed=args.seed,
        families=[_family_entry(f, args.real) for f in fams],
        verification=verification,
    )
    return rep, EXIT["ok"]


# -- oracle -------------------------------------------------------------------------

_GROUP_RE = re.compile(r"^Z(\d+)((?:xZ\d+)*)$")
_FIELD_RE = re.compile(r"^F?(\d+)$")
_MULTIPLICATIVE_SHAPES = (ShapeId.S3, ShapeId.S7)
_FIELD_ADDITIVE_SHAPES = (ShapeId.S2, ShapeId.S5)


def _moduli(group: str) -> Tuple[int, ...]:
    m = _GROUP_RE.match(group.replace(" ", ""))
    if not m:
        raise CliError(f"group must look like Z5 or Z3xZ3, got {group!r}")
    rest = [int(v) for v in re.findall(r"\d+", m.group(2))]
    return (int(m.group(1)), *rest)


def build_oracle_model(shape, group: str, field: str, B: Optional[str], alpha: Optional[int], with_zero: bool):
    """(PrimeFieldModel, DomainSpec of its families, description) for CLI-style specs."""
    shape = ShapeId(shape)
    fm = _FIELD_RE.match(field.strip())
    if not fm:
        raise CliError(f"field must look like F5, got {field!r}")
    p = int(fm.group(1))
    try:
        F = PrimeField(p)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    moduli = _moduli(group)
    cyclic_p = moduli == (p,)
    cod = Codomain.GeneralField
    if shape in _MULTIPLICATIVE_SHAPES:
        if not cyclic_p:
            raise CliError(f"{shape.value} needs the field's own elements: use --group Z{p}")
        dom = multiplicative_model(p, with_zero)
        spec = DomainSpec(DomainClass.FieldWithZero if with_zero else DomainClass.FieldMultiplicativeNoZero, "multiplicative", cod)
    elif shape in _FIELD_ADDITIVE_SHAPES:
        if not cyclic_p or with_zero:
            raise CliError(f"{shape.value} needs the additive group of the field: use --group Z{p} without --with-zero")
        dom = additive_field_model(p)
        spec = DomainSpec(DomainClass.FieldAdditive, "additive", cod)
    else:
        try:
            dom = FiniteGroup(moduli)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        spec = DomainSpec(DomainClass.Group, "additive", cod)
        if with_zero:
            if shape != ShapeId.S6:
                raise CliError("--with-zero is supported for S3, S6 and S7")
            dom = adjoin_zero(dom)
            spec = DomainSpec(DomainClass.FieldWithZero, "multiplicative", cod)
    Bt = None
    if shape == ShapeId.S1:
        if B is None:
            raise CliError("S1 needs --B (product or zero)")
        if B == "zero":
            Bt = np.zeros((dom.order, dom.order), dtype=np.int64)
        elif B == "product":
            if dom.embed is None and not cyclic_p:
                raise CliError(f"B(x,y)=x*y is only biadditive on Z{p} with F{p}")
            vals = np.asarray(dom.embed if dom.embed is not None else np.arange(p), dtype=np.int64)
            Bt = (vals[:, None] * vals[None, :]) % p
        else:
            raise CliError(f"unknown --B {B!r}; use product or zero")
    al = None
    if shape in (ShapeId.S2, ShapeId.S3):
        if alpha is None:
            raise CliError(f"{shape.value} needs --alpha")
        al = int(alpha) % p
    model = PrimeFieldModel(dom, F, Bt, al)
    desc = f"{dom.name} -> F{p}"
    if Bt is not None:
        desc += f", B = {B}"
    if al is not None:
        desc += f", alpha = {al}"
    return model, spec, desc


def cmd_oracle(args) -> Tuple[dict, int]:
    try:
        shape = ShapeId(args.shape)
    except ValueError as exc:
        raise CliError(f"unknown shape {args.shape!r}") from exc
    if shape in (ShapeId.OpenProblemMixed, ShapeId.Unrecognized):
        raise CliError(f"{shape.value} has no oracle")
    model, spec, desc = build_oracle_model(shape, args.group, args.field, args.B, args.alpha, args.with_zero)
    try:
        sols = enumerate_solutions(shape, model, bound=args.bound)
    except SearchSpaceExceeded as exc:
        raise CliError(str(exc), EXIT["bound"]) from exc
    except CharacteristicTwoError as exc:
        raise CliError(str(exc)) from exc
    try:
        fams = solve_shape(shape, spec)
    except UnsupportedShapeError as exc:
        fams, note = [], str(exc)
    else:
        note = None
    listed = []
    matched = 0
    for s in sols:
        label = next((f.label for f in fams if match_family(s, f, model)), None)
        matched += label is not None
        if len(listed) < MAX_LISTED:
            entry = {"f": list(s[0])}
            if len(s) > 1:
                entry["alpha"] = list(s[1])
            entry["family"] = label
            listed.append(entry)
    rep = _report(
        "oracle",
        shape=shape.value,
        model=desc,
        count=len(sols),
        matched=matched,
        all_matched=matched == len(sols),
        solutions=listed,
        truncated=len(sols) > MAX_LISTED,
        labels=" ".join(model.domain.labels),
    )
    if note:
        rep["note"] = note
    return rep, EXIT["ok"]


# -- fit ----------------------------------------------------------------------------


def cmd_fit(args) -> Tuple[dict, int]:
    try:
        samples = read_samples_csv(args.csv)
        res = fit_regular(samples, args.variant, seed=args.seed, max_iter=args.max_iter)
    except SampleError as exc:
        raise CliError(f"bad samples: {exc}") from exc
    rep = _report("fit", source=str(args.csv), samples=len(samples), seed=args.seed, fit=res.to_dict())
    return rep, EXIT["ok"] if res.converged else EXIT["no_convergence"]


# -- verify -------------------------------------------------------------------------


def _named_consts(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise CliError(f"--const expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_verify(args) -> Tuple[dict, int]:
    try:
        domain = _domain(args.domain, args.codomain, False, args.equation)
        eq = parse(args.equation, domain)
    except ParseError as exc:
        raise CliError(f"parse error: {exc.message} at offset {exc.position}") from exc
    table = table_for(eq.domain)
    try:
        assign = {"f": parse_exppoly(args.f, table)}
        if args.a is not None:
            assign["a"] = parse_exppoly(args.a, table)
        knowns = {}
        for k, v in _named_consts(args.const).items():
            knowns[k] = as_scalar(v)
        if args.B is not None:
            knowns["B"] = parse_exppoly(args.B, table)
        res = residual(eq, assign, knowns)
    except (ExpPolyError, ValueError, TypeError) as exc:
        raise CliError(f"cannot evaluate the instance: {exc}") from exc
    zero = res.is_zero()
    rep = _report(
        "verify",
        equation=args.equation,
        domain=eq.domain.describe(),
        shape=classify(eq).value,
        f=assign["f"].dump(),
        alpha=assign["a"].dump() if "a" in assign else None,
        residual=res.dump(),
        zero=zero,
    )
    return rep, EXIT["ok"] if zero else EXIT["nonzero_residual"]


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="feforge", description="Perturbed Cauchy-difference functional equations.")
    ap.add_argument("--version", action="version", version=f"feforge {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a versioned JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for all sampling (default 0)")
    sub = ap.add_subparsers(dest="command", required=True)

    domains = sorted(DOMAIN_FLAGS) + ["field"]
    s = sub.add_parser("solve", parents=[common], help="classify and solve an equation")
    s.add_argument("equation")
    s.add_argument("--domain", default="group", choices=domains)
    s.add_argument("--codomain", choices=("complex", "real", "field"))
    s.add_argument("--real", action="store_true", help="restrict to real-valued solutions")
    s.add_argument("--draws", type=int, default=10, help="random parameter draws checked per family")
    s.set_defaults(run=cmd_solve)

    o = sub.add_parser("oracle", parents=[common], help="exhaustive solutions on a finite model")
    o.add_argument("--shape", required=True)
    o.add_argument("--group", required=True, help="Z5, Z3xZ3, ...")
    o.add_argument("--field", required=True, help="F5, F7, ...")
    o.add_argument("--B", choices=("product", "zero"))
    o.add_argument("--alpha", type=int)
    o.add_argument("--with-zero", action="store_true", help="adjoin an absorbing zero to the domain")
    o.add_argument("--bound", type=int, help="search-space bound (default FEFORGE_MAX_SPACE or 1e7)")
    o.set_defaults(run=cmd_oracle)

    f = sub.add_parser("fit", parents=[common], help="fit a regular family to x,f,alpha samples")
    f.add_argument("csv")
    f.add_argument("--variant", default="auto", choices=FIT_VARIANTS)
    f.add_argument("--max-iter", type=int, default=200)
    f.set_defaults(run=cmd_fit)

    v = sub.add_parser("verify", parents=[common], help="symbolic residual of a concrete instance")
    v.add_argument("equation")
    v.add_argument("--f", required=True, help="f as an exponential polynomial, e.g. '3*a1 + m1 - 1'")
    v.add_argument("--a", "--alpha-fn", dest="a", help="a(x) as an exponential polynomial")
    v.add_argument("--const", action="append", help="NAME=VALUE for named constants such as alpha")
    v.add_argument("--B", help="B(x,y) as a polynomial in x and y")
    v.add_argument("--domain", default="group", choices=domains)
    v.add_argument("--codomain", choices=("complex", "real", "field"))
    v.set_defaults(run=cmd_verify)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.run(args)
    except CliError as exc:
        report, code = _report(args.command, status="error", error=str(exc)), exc.code
        print(f"feforge: {exc}", file=sys.stderr)
    emit(report, args.json)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
