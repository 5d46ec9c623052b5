"""Command-line interface.

Subcommands: norm, maximal, lpaley, hardy, decompose, czop, verify.
Grid data moves through GRIDFN1 containers; reports are CSV plus the one-line
summary `SUITE <name> PASS|FAIL cases=<k> failures=<m>`.  A key=value config
file (INI sections) supplies defaults that explicit flags override.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import atoms as at
from . import czops as cz
from . import lpaley as lp
from . import maximal as mx
from . import norms as nm
from . import orlicz as oz
from .grid import GridFunction, read_gridfn, write_gridfn
from .norms import SliceSpaceParams
from .suites import SUITES, calibrate_suite, golden_path, run_suite


def parse_phi(text: str) -> oz.OrliczFunction:
    """Parse growth-function specs like power:2, powerlog:1.5, logquotient."""
    parts = text.split(":")
    kind = parts[0].lower()
    if kind == "power":
        return oz.power(float(parts[1]))
    if kind in ("powerlog", "power-log"):
        return oz.power_log(float(parts[1]))
    if kind in ("logquotient", "log-quotient", "logq"):
        return oz.log_quotient()
    raise SystemExit(f"unknown growth function {text!r}")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    cp = configparser.ConfigParser()
    cp.read(path)
    flat = {}
    for section in cp.sections():
        for k, v in cp[section].items():
            flat[f"{section}.{k}"] = v
    return flat


def _slice_params(args) -> SliceSpaceParams:
    return SliceSpaceParams(args.t, args.q, parse_phi(args.phi))


def _cmd_norm(args) -> int:
    f = read_gridfn(args.infile)
    rows = []
    if args.space == "lebesgue":
        r = math.inf if args.r == "inf" else float(args.r)
        value = nm.lebesgue_norm(f, r)
        rows.append((args.infile, "lebesgue", "", args.r, "", value))
    elif args.space == "luxemburg":
        phi = parse_phi(args.phi)
        value = nm.luxemburg_norm(f, phi)
        rows.append((args.infile, "luxemburg", "", "", args.phi, value))
    elif args.space == "slice":
        value = nm.slice_norm(f, _slice_params(args))
        rows.append((args.infile, "slice", args.t, args.q, args.phi, value))
    elif args.space == "amalgam":
        value = nm.amalgam_norm(f, args.t, args.q, parse_phi(args.phi))
        rows.append((args.infile, "amalgam", args.t, args.q, args.phi, value))
    else:
        raise SystemExit(f"unknown space {args.space!r}")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["function_id", "space", "t", "q", "phi_kind", "value"])
    for row in rows:
        w.writerow(row)
    return 0


def _cmd_maximal(args) -> int:
    f = read_gridfn(args.infile)
    spec = f.spec
    scales = mx.dyadic_scales(spec)
    cfg = mx.MaximalConfig(
        radius_set=mx.default_radius_set(spec),
        aperture=args.a,
        peetre_b=args.b,
        dictionary_N=args.N,
        dictionary=tuple(mx.make_default_dictionary(spec.dim, args.N)),
    )
    gauss = mx.unit_gaussian(spec.dim)
    ops = {
        "centered": lambda: mx.hl_centered(f, cfg),
        "uncentered": lambda: mx.hl_uncentered(f, cfg),
        "radial": lambda: mx.radial_maximal(f, gauss, scales),
        "nontan": lambda: mx.nontangential_maximal(f, gauss, args.a, scales),
        "peetre": lambda: mx.peetre_maximal(f, gauss, args.b, scales),
        "grand": lambda: mx.grand_maximal(f, cfg, scales),
    }
    if args.op not in ops:
        raise SystemExit(f"unknown op {args.op!r}")
    write_gridfn(args.outfile, ops[args.op]())
    return 0


def _cmd_lpaley(args) -> int:
    f = read_gridfn(args.infile)
    spec = f.spec
    bump = lp.make_band_bump(spec)
    cfg = lp.LPConfig(spec, lam=args.lam)
    ops = {
        "g": lambda: lp.g_function(f, bump, cfg),
        "S": lambda: lp.lusin_S(f, bump, cfg),
        "gstar": lambda: lp.g_lambda_star(f, bump, cfg),
        "poisson": lambda: lp.poisson_maximal(f, mx.dyadic_scales(spec)),
    }
    if args.op not in ops:
        raise SystemExit(f"unknown op {args.op!r}")
    write_gridfn(args.outfile, ops[args.op]())
    return 0


def _cmd_hardy(args) -> int:
    f = read_gridfn(args.infile)
    value = at.hardy_norm(f, _slice_params(args))
    print(value)
    return 0


def _cmd_decompose(args) -> int:
    f = read_gridfn(args.infile)
    params = _slice_params(args)
    dec = at.atomic_decompose(f, params, s=args.s, d=args.d)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = outdir / "atoms.csv"
    with open(manifest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "lambda", "center", "side", "r", "d", "payload"])
        for i, (lam, atom) in enumerate(dec.terms):
            payload = f"atom_{i:04d}.grid"
            write_gridfn(str(outdir / payload), atom.payload)
            w.writerow(
                [i, repr(lam), ";".join(repr(c) for c in atom.Q.center), repr(atom.Q.side), atom.r, atom.d, payload]
            )
    write_gridfn(str(outdir / "residual.grid"), dec.residual)
    print(f"atoms={len(dec.terms)} manifest={manifest}")
    return 0


def _cmd_czop(args) -> int:
    f = read_gridfn(args.infile)
    realization = {"mult": "multiplier", "direct": "direct"}[args.realization]
    if args.kernel == "hilbert":
        T = cz.CZKernel("hilbert", 1.0, args.eps, realization)
    elif args.kernel in ("riesz1", "riesz2"):
        T = cz.CZKernel(args.kernel, 1.0, args.eps, realization)
    else:
        raise SystemExit(f"unknown kernel {args.kernel!r}")
    write_gridfn(args.outfile, cz.apply_cz(T, f))
    return 0


def _cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    outdir = Path(args.out) if args.out else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    if args.calibrate:
        seeds = [int(s) for s in str(args.calibrate_seeds).split(",")]
        measured_all = {name: calibrate_suite(name, seeds) for name in names}
        path = golden_path()
        path.parent.mkdir(parents=True, exist_ok=True)
        existing = json.loads(path.read_text()) if path.exists() else {}
        existing.update(measured_all)
        path.write_text(json.dumps(existing, indent=1, sort_keys=True))
        print(f"calibration over seeds {seeds} written to {path}")
        return 0
    ok = True
    for name in names:
        report, _ = run_suite(name, seed=args.seed)
        print(report.summary_line())
        if outdir:
            report.write_csv(str(outdir / f"{name}.csv"))
        ok &= report.passed
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="oslab", description=__doc__)
    parser.add_argument("--config", default=None, help="key=value INI config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="compute a norm of a GRIDFN1 function")
    p.add_argument("--space", required=True, choices=["lebesgue", "luxemburg", "slice", "amalgam"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--r", default="2")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--phi", default="power:2")
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("maximal", help="apply a maximal operator")
    p.add_argument("--op", required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.5)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=_cmd_maximal)

    p = sub.add_parser("lpaley", help="square functions and Poisson maximal")
    p.add_argument("--op", required=True, choices=["g", "S", "gstar", "poisson"])
    p.add_argument("--lambda", dest="lam", type=float, default=2.5)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=_cmd_lpaley)

    p = sub.add_parser("hardy", help="Hardy quasi-norm")
    p.add_argument("--norm", action="store_true")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--phi", default="power:2")
    p.set_defaults(func=_cmd_hardy)

    p = sub.add_parser("decompose", help="atomic decomposition")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--s", type=float, default=0.7)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--q", type=float, default=0.8)
    p.add_argument("--phi", default="power:0.8")
    p.add_argument("--out", default="decomposition")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("czop", help="apply a singular integral operator")
    p.add_argument("--kernel", required=True, choices=["hilbert", "riesz1", "riesz2"])
    p.add_argument("--realization", default="mult", choices=["mult", "direct"])
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", required=True)
    p.set_defaults(func=_cmd_czop)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--calibrate", action="store_true")
    p.add_argument("--calibrate-seeds", default="0,2,4")
    p.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    cfg = _load_config(args.config)
    for key, val in cfg.items():
        section, name = key.split(".", 1)
        if args.command == section and hasattr(args, name):
            default = parser.get_default(name)
            if getattr(args, name) == default:
                typ = type(default) if default is not None else str
                setattr(args, name, typ(val) if default is not None else val)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
