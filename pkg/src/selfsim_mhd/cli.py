"""Command-line driver.

    selfsim-mhd landau eval --a 2 --rho 1 --phi 0.5
    selfsim-mhd landau beta --a 2
    selfsim-mhd landau a --beta 34.77
    selfsim-mhd landau flux --a 2 --r 1 --order 64
    selfsim-mhd profile residual --a 2 --domain full --samples 1000
    selfsim-mhd profile export --a 2 --out landau.csv
    selfsim-mhd bvp shoot --bc noslip --scan f0:-2:2:0.5,P0:-2:2:0.5
    selfsim-mhd verify pde --a 2 --grid 101 --h 1e-3
    selfsim-mhd verify suite

Exit status: 0 all checks passed, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys

import numpy as np

from .errors import SelfSimError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ODE_TOL = 1e-10
FLUX_TOL = 1e-6
BC_ALIASES = {"full": "full_space", "noslip": "noslip", "navier": "navier_slip"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output ---------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj) -> str:
    """Compact JSON with floats fixed at 17 significant digits."""
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            out.update(_flatten(v, f"{prefix}{k}."))
        return out
    if isinstance(obj, (list, tuple, np.ndarray)) and not all(isinstance(v, (int, float, np.number)) for v in obj):
        out = {}
        for i, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}{i}."))
        return out
    return {prefix[:-1]: obj}


def _cell(v) -> str:
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_cell(x) for x in v)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    return str(v)


def emit(payload: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(dumps(payload) + "\n")
        return
    flat = _flatten(payload)
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow(_cell(v) for v in flat.values())
        return
    for k, v in flat.items():
        out.write(f"{k}: {_cell(v)}\n")


def write_profile_csv(sample: dict, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    cols = ("phi", "f", "g", "h", "B", "P")
    w.writerow(cols)
    for row in zip(*(np.asarray(sample[c], dtype=float) for c in cols)):
        w.writerow(_fmt_float(float(v)) for v in row)


# -- validation -----------------------------------------------------------------

def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _check_a(a: float) -> None:
    _require(math.isfinite(a) and abs(a) > 1.0, f"--a {a:g} is outside the Landau domain |a| > 1")


def parse_scan(text: str):
    """``name:lo:hi:step`` ranges separated by commas."""
    from .shooting import PARAM_NAMES, ScanRange

    ranges = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        bits = part.split(":")
        _require(len(bits) == 4, f"scan range {part!r} must read name:lo:hi:step")
        name = bits[0]
        _require(name in PARAM_NAMES, f"scan parameter {name!r} must be one of {', '.join(PARAM_NAMES)}")
        try:
            lo, hi, step = (float(b) for b in bits[1:])
        except ValueError:
            raise UsageError(f"scan range {part!r} has a non-numeric bound") from None
        _require(step > 0 and hi >= lo, f"scan range {part!r} needs lo <= hi and step > 0")
        ranges.append(ScanRange(name, lo, hi, step))
    _require(bool(ranges), "--scan needs at least one range")
    return tuple(ranges)


# -- commands -------------------------------------------------------------------

def cmd_landau_eval(args, out):
    from .geometry import SphericalPoint
    from .landau import landau_field

    _check_a(args.a)
    _require(args.rho > 0, "--rho must be positive")
    _require(0.0 <= args.phi <= math.pi, "--phi must lie in [0, pi]")
    vec, p = landau_field(args.a, SphericalPoint(args.rho, args.theta, args.phi))
    cart = vec.to_cartesian()
    emit({"a": args.a, "rho": args.rho, "theta": args.theta, "phi": args.phi,
          "u_rho": vec.v_rho, "u_theta": vec.v_theta, "u_phi": vec.v_phi,
          "u_cartesian": [cart.x1, cart.x2, cart.x3], "p": p}, args.format, out)
    return EXIT_OK


def cmd_landau_beta(args, out):
    from .landau import beta_from_a

    _check_a(args.a)
    emit({"a": args.a, "beta": beta_from_a(args.a)}, args.format, out)
    return EXIT_OK


def cmd_landau_a(args, out):
    from .landau import a_from_beta

    _require(math.isfinite(args.beta) and args.beta != 0.0, "--beta must be finite and nonzero")
    emit({"beta": args.beta, "a": a_from_beta(args.beta, branch=args.branch).a}, args.format, out)
    return EXIT_OK


def cmd_landau_flux(args, out):
    from .landau import beta_from_a, force_flux

    _check_a(args.a)
    _require(args.r > 0, "--r must be positive")
    _require(args.order >= 2, "--order must be at least 2")
    flux = force_flux(args.a, args.r, args.order)
    beta = beta_from_a(args.a)
    rel = float(np.max(np.abs(flux - np.array([0.0, 0.0, beta])))) / abs(beta)
    ok = rel <= FLUX_TOL
    emit({"a": args.a, "r": args.r, "order": args.order, "flux": list(flux), "beta": beta,
          "relative_error": rel, "pass": ok}, args.format, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_profile_residual(args, out):
    from .landau import landau_profiles
    from .operators import FULL, HALF
    from .profiles import boundary_residuals, ode_residuals

    _check_a(args.a)
    _require(args.samples >= 1, "--samples must be at least 1")
    hi = FULL[1] if args.domain == "full" else HALF[1]
    phi = np.linspace(0.0, hi, args.samples + 2)[1:-1]
    pr = landau_profiles(args.a, FULL if args.domain == "full" else HALF)
    res = ode_residuals(pr, args.domain, phi)
    per = {f"r{k + 1}": float(np.max(np.abs(r))) for k, r in enumerate(res.as_array())}
    payload = {"a": args.a, "domain": args.domain, "samples": args.samples,
               "max_residual": res.max_abs(), "residuals": per}
    ok = res.max_abs() < ODE_TOL
    if args.domain == "full":
        bnd = boundary_residuals(pr, "full_space")
        payload["boundary_max"] = bnd.max_abs()
        ok = ok and bnd.max_abs() < ODE_TOL
    payload["pass"] = ok
    emit(payload, args.format, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_profile_export(args, out):
    from .landau import landau_profiles

    _check_a(args.a)
    _require(args.samples >= 2, "--samples must be at least 2")
    pad = 1e-6
    phi = np.linspace(pad, math.pi - pad, args.samples)
    sample = landau_profiles(args.a).sample(phi)
    if args.out == "-":
        write_profile_csv(sample, out)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            write_profile_csv(sample, fh)
    return EXIT_OK


def cmd_bvp_shoot(args, out):
    from .shooting import AxisParams, PARAM_NAMES, ShootingConfig, shoot

    bc = BC_ALIASES[args.bc]
    scan = parse_scan(args.scan)
    unknowns = tuple(filter(None, (u.strip() for u in args.unknowns.split(","))))
    _require(bool(unknowns) and set(unknowns) <= set(PARAM_NAMES), f"--unknowns must be drawn from {PARAM_NAMES}")
    base = AxisParams(f0=args.f0, h1=args.h1, P0=args.P0)
    res = shoot(bc, unknowns, base=base, cfg=ShootingConfig(), scan=scan)
    roots = [{"f0": p.f0, "h1": p.h1, "P0": p.P0, "residual": r} for p, r in res.roots]
    ok = bool(roots)
    emit({"bc": bc, "unknowns": list(unknowns), "starts": res.starts, "converged": res.converged_runs,
          "roots": roots, "pass": ok}, args.format, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_pde(args, out):
    from .landau import landau_cartesian
    from .verify import GridRegion, mhd_residual_grid, zero_vector

    _check_a(args.a)
    _require(args.h > 0, "--h must be positive")
    try:
        region = GridRegion(n=args.grid)
    except ValueError as exc:
        raise UsageError(f"--grid {args.grid}: {exc}") from None
    u, p = landau_cartesian(args.a)
    rep = mhd_residual_grid((u, zero_vector, p), region, args.h)
    payload = rep.as_dict()
    ok = True
    if args.max_momentum_rms is not None:
        ok &= rep.momentum_residual_rms <= args.max_momentum_rms
    if args.max_div is not None:
        ok &= max(rep.div_u_max, rep.div_B_max, rep.induction_residual_max) <= args.max_div
    payload["pass"] = bool(ok)
    emit(payload, args.format, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_suite(args, out):
    from .acceptance import CRITERIA, format_table, run_all

    selected = None
    if args.only:
        try:
            selected = [int(k) for k in args.only.split(",") if k.strip()]
        except ValueError:
            raise UsageError("--only takes comma-separated criterion numbers") from None
        _require(all(k in CRITERIA for k in selected), f"--only numbers must lie in 1..{len(CRITERIA)}")
    results = run_all(selected)
    if args.format == "json":
        emit({"criteria": [{"number": r.number, "title": r.title, "pass": r.passed, "detail": r.detail}
                           for r in results],
              "pass": all(r.passed for r in results)}, "json", out)
    else:
        out.write(format_table(results) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "human"), default="human")
    common.add_argument("--config", help="JSON file of flag defaults for this subcommand")

    parser = _Parser(prog="selfsim-mhd", description="Self-similar MHD profiles, Landau jets and checks.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    landau = groups.add_parser("landau").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = landau.add_parser("eval", parents=[common])
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.set_defaults(handler=cmd_landau_eval)
    p = landau.add_parser("beta", parents=[common])
    p.add_argument("--a", type=float, required=True)
    p.set_defaults(handler=cmd_landau_beta)
    p = landau.add_parser("a", parents=[common])
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--branch", type=int, choices=(-1, 1), default=None)
    p.set_defaults(handler=cmd_landau_a)
    p = landau.add_parser("flux", parents=[common])
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--order", type=int, default=64)
    p.set_defaults(handler=cmd_landau_flux)

    profile = groups.add_parser("profile").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = profile.add_parser("residual", parents=[common])
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--domain", choices=("full", "half"), default="full")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(handler=cmd_profile_residual)
    p = profile.add_parser("export", parents=[common])
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--out", required=True, help="output path, '-' for stdout")
    p.add_argument("--samples", type=int, default=1001)
    p.set_defaults(handler=cmd_profile_export)

    bvp = groups.add_parser("bvp").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = bvp.add_parser("shoot", parents=[common])
    p.add_argument("--bc", choices=tuple(BC_ALIASES), required=True)
    p.add_argument("--scan", default="f0:-20:20:0.5,P0:-20:20:0.5")
    p.add_argument("--unknowns", default="f0,P0")
    p.add_argument("--f0", type=float, default=0.0)
    p.add_argument("--h1", type=float, default=0.0)
    p.add_argument("--P0", type=float, default=0.0)
    p.set_defaults(handler=cmd_bvp_shoot)

    verify = groups.add_parser("verify").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = verify.add_parser("pde", parents=[common])
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--max-momentum-rms", type=float, default=None)
    p.add_argument("--max-div", type=float, default=None)
    p.set_defaults(handler=cmd_verify_pde)
    p = verify.add_parser("suite", parents=[common])
    p.add_argument("--only", default="", help="comma-separated criterion numbers")
    p.set_defaults(handler=cmd_verify_suite)
    return parser


def _config_path(argv):
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _choices(parser):
    return next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction)).choices


def _apply_config(parser, argv, path):
    """Load ``path`` and install its keys as defaults of the addressed subcommand."""
    words = [t for t in argv if not t.startswith("-")]
    groups = _choices(parser)
    if len(words) < 2 or words[0] not in groups or words[1] not in _choices(groups[words[0]]):
        return
    sub = _choices(groups[words[0]])[words[1]]
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    if not isinstance(config, dict):
        raise UsageError("config file must hold a JSON object")
    overrides = {k.replace("-", "_"): v for k, v in config.items()}
    known = {a.dest for a in sub._actions} - {"help", "config"}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
    sub.set_defaults(**overrides)
    for action in sub._actions:
        if action.dest in overrides:
            action.required = False


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        path = _config_path(argv)
        if path is not None:
            _apply_config(parser, argv, path)
        args = parser.parse_args(argv)
        return args.handler(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except SelfSimError as exc:
        if isinstance(exc, ValueError):
            err.write(f"error: {exc}\n")
            return EXIT_USAGE
        err.write(f"failed: {exc}\n")
        return EXIT_FAIL
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


__all__ = ["run", "main", "dumps", "emit", "parse_scan", "build_parser", "write_profile_csv"]


if __name__ == "__main__":
    main()
