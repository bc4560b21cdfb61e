"""Command-line interface.

Exit status: 0 on success, 1 when a verification report fails (the report
is still written), 2 on bad input or a domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from .config import ConfigError, CurveConfig, classify_affine_dynkin, semidefiniteness_report, to_dot
from .construction import (
    ConstructedSurface,
    ConstructionError,
    config_hypotheses,
    construct_d8,
    construct_e8,
    sweep_q,
    sweep_summary,
    twist_nontorsion,
    verify_hypotheses,
)
from .exact_linalg import LinalgError, rational
from .lattice import LatticeError, SurfaceLattice
from .pencils import ClusterError, CurveError, PencilError, PlaneCurve, degenerate_member_config, resolve_pencil, start_pencil
from .zariski import ZariskiError, zariski_decompose

OUTPUT_DIR_ENV = "RATSURF_OUTPUT_DIR"

DOMAIN_ERRORS = (
    ConstructionError,
    ConfigError,
    ClusterError,
    CurveError,
    PencilError,
    LatticeError,
    LinalgError,
    ZariskiError,
)


class InputError(Exception):
    pass


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _emit(data: Any, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=False) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    p = _out_path(out)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)


def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_config(path: str) -> CurveConfig:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "boundary" in data:  # a surface file
        return ConstructedSurface.from_json(data).boundary
    ambient = SurfaceLattice.from_json(data["surface"]) if "surface" in data else None
    return CurveConfig.from_json(data, ambient)


def _load_surface(path: str) -> ConstructedSurface:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return ConstructedSurface.from_json(data)


def _rationals(text: str) -> list:
    try:
        return [rational(t) for t in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError, LinalgError) as exc:
        raise InputError(f"cannot read rationals from {text!r}") from exc


def _surface_from_seed(seed: dict) -> ConstructedSurface:
    recipe = seed.get("recipe")
    if recipe == "e8":
        return construct_e8(seed.get("a", 0), seed.get("b", 1))
    if recipe == "d8":
        return construct_d8(seed.get("M", [1, 0, 1]))
    raise InputError(f"unknown recipe {recipe!r}; expected 'e8' or 'd8'")


# --- subcommands ----------------------------------------------------------------


def cmd_construct(args: argparse.Namespace) -> int:
    if args.seed:
        seed = _load_json(args.seed)
        if not isinstance(seed, dict):
            raise InputError("seed must be a JSON object")
        s = _surface_from_seed(seed)
    elif args.recipe == "e8":
        s = construct_e8(rational(args.a), rational(args.b))
    elif args.recipe == "d8":
        s = construct_d8(_rationals(args.m))
    else:
        raise InputError("give a recipe (e8 or d8) or --seed")
    if args.twist_q is not None:
        s = twist_nontorsion(s, rational(args.twist_q))
    report = verify_hypotheses(s, args.n)
    _emit({"surface": s.to_json(), "report": report.to_json()} if args.with_report else s.to_json(), args.out)
    if args.report:
        _emit(report.to_json(), args.report)
    if args.out is not None:
        sys.stdout.write(report.render_text() + "\n")
    return 0


def cmd_twist(args: argparse.Namespace) -> int:
    s = twist_nontorsion(_load_surface(args.surface), rational(args.q))
    _emit(s.to_json(), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.surface:
        report = verify_hypotheses(_load_surface(args.surface), args.n)
    else:
        report = config_hypotheses(_load_config(args.config))
    if args.out:
        _emit(report.to_json(), args.out)
    if args.json:
        _emit(report.to_json(), None)
    else:
        sys.stdout.write(report.render_text() + "\n")
    return 0 if report.overall else 1


def cmd_classify(args: argparse.Namespace) -> int:
    c = _load_config(args.config)
    verdict = classify_affine_dynkin(c)
    if args.json:
        _emit({"verdict": verdict.to_json(), "semidefiniteness": semidefiniteness_report(c).to_json()}, None)
    else:
        marks = "" if verdict.marks is None else " marks=" + ",".join(map(str, verdict.marks))
        reason = f" ({verdict.reason})" if verdict.reason else ""
        sys.stdout.write(f"{verdict.name}{marks}{reason}\n")
    if args.dot:
        _write_dot(c, args.dot, verdict.marks)
    return 0


def cmd_zariski(args: argparse.Namespace) -> int:
    c = _load_config(args.config)
    if args.d is not None:
        d = _rationals(args.d)
    elif c.multiplicities is not None:
        d = list(c.multiplicities)
    else:
        raise InputError("give --d or a configuration with multiplicities")
    r = zariski_decompose(c, d)
    _emit(r.to_json(c.labels), args.out)
    return 0


def _parse_member(text: str) -> list[tuple[PlaneCurve, int]]:
    factors = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        curve, _, k = part.rpartition(":") if ":" in part else (part, "", "1")
        try:
            factors.append((PlaneCurve.parse(curve), int(k)))
        except ValueError as exc:
            raise InputError(f"bad member factor {part!r}: {exc}") from exc
    return factors


def cmd_resolve(args: argparse.Namespace) -> int:
    if args.seed:
        seed = _load_json(args.seed)
        F, G = PlaneCurve.parse(seed["F"]), PlaneCurve.parse(seed["G"])
        member = seed.get("member")
    else:
        if not (args.F and args.G):
            raise InputError("give --seed or both --F and --G")
        F, G = PlaneCurve.parse(args.F), PlaneCurve.parse(args.G)
        member = args.member
    state = resolve_pencil(start_pencil(F, G))
    out = state.to_json()
    if member:
        cfg = degenerate_member_config(state, _parse_member(member))
        out["member"] = member
        out["fiber"] = cfg.to_json()
        out["verdict"] = classify_affine_dynkin(cfg).to_json()
    _emit(out, args.out)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    s = _load_surface(args.surface)
    entries = sweep_q(s, [rational(q) for q in args.q], args.n)
    summary = sweep_summary(entries)
    _emit({"summary": summary, "entries": [e.to_json() for e in entries]}, args.out)
    return 0 if summary["all_verified"] and summary["fingerprints_identical"] else 1


def _write_dot(c: CurveConfig, path: str, marks: Sequence[int] | None = None) -> None:
    if marks is None:
        marks = c.multiplicities
    p = _out_path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(to_dot(c, marks))


def cmd_export_dot(args: argparse.Namespace) -> int:
    c = _load_config(args.config)
    if args.out is None:
        sys.stdout.write(to_dot(c, c.multiplicities))
    else:
        _write_dot(c, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratsurf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build an E8 or D8 anticanonical surface")
    c.add_argument("recipe", nargs="?", choices=["e8", "d8"])
    c.add_argument("--seed", help="seed JSON with a 'recipe' key")
    c.add_argument("--a", default="0")
    c.add_argument("--b", default="1")
    c.add_argument("--m", default="1,0,1", help="coefficients of the linear form M in x, y, z")
    c.add_argument("--twist-q", help="twist at the point v1 = q of the distinguished component")
    c.add_argument("--n", type=int, default=5, help="range for the h0(-nK) and chi checks")
    c.add_argument("--out")
    c.add_argument("--report", help="also write the verification report here")
    c.add_argument("--with-report", action="store_true", help="bundle the report into the main output")
    c.set_defaults(func=cmd_construct)

    t = sub.add_parser("twist", help="replace the base point P by Q on the distinguished component")
    t.add_argument("--surface", required=True)
    t.add_argument("--q", required=True)
    t.add_argument("--out")
    t.set_defaults(func=cmd_twist)

    v = sub.add_parser("verify", help="run the hypothesis checks")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--surface")
    g.add_argument("--config")
    v.add_argument("--n", type=int, default=5)
    v.add_argument("--out")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("classify", help="affine Dynkin type of a configuration")
    k.add_argument("--config", required=True)
    k.add_argument("--dot")
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_classify)

    z = sub.add_parser("zariski", help="Zariski decomposition within a configuration")
    z.add_argument("--config", required=True)
    z.add_argument("--d", help="coefficients, defaults to the configuration multiplicities")
    z.add_argument("--out")
    z.set_defaults(func=cmd_zariski)

    r = sub.add_parser("resolve", help="resolve the base points of a pencil")
    r.add_argument("--seed")
    r.add_argument("--F")
    r.add_argument("--G")
    r.add_argument("--member", help="factors like 'z:3' or 'z:1; x*z - y^2:1'")
    r.add_argument("--out")
    r.set_defaults(func=cmd_resolve)

    s = sub.add_parser("sweep", help="twist at several parameters and compare fingerprints")
    s.add_argument("--surface", required=True)
    s.add_argument("--q", nargs="+", required=True)
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("export-dot", help="write the dual graph as DOT")
    d.add_argument("--config", required=True)
    d.add_argument("--out")
    d.set_defaults(func=cmd_export_dot)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
    except DOMAIN_ERRORS as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"malformed input: {exc!r}\n")
    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
