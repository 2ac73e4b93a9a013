"""Command-line front end: spectrum | verify | figure1 | density | nu | ks | ortho."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .asymptotics import DensityModel, nu_from_theta, rho_S, rho_V, stieltjes_ladder, theta_c, vanvleck_ladder
from .core import load_system, validate_system
from .errors import LameError
from .interlacing import WRONSKIAN_TOL, sweep
from .orthogonality import orthogonality_report
from .spectrum import spectrum_from_dict, spectrum_to_json, van_vleck_spectrum
from .zeros import fmt, label_solutions, solutions_csv

FIGURE1 = ((-1.0, 0.0, 2.0), (1.0, 2.0, 1.0 / 3.0))
CLAIMS = ("theorem1", "theorem2", "theorem3", "corollary", "van_vleck_chain", "nu_hat_bounds", "wronskian")


class UsageError(Exception):
    pass


def parse_floats(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def parse_range(text: str) -> list:
    """'6', '1..8', '16,32,64' or mixtures like '1..3,8'."""
    out = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree range {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("degrees must be >= 1")
    return sorted(set(out))


def _system(args, default=None):
    if args.config:
        return load_system(args.config)
    if args.alpha is None and args.rho is None:
        if default is None:
            raise UsageError("give --alpha and --rho, or --config")
        return validate_system(*default)
    if args.alpha is None or args.rho is None:
        raise UsageError("--alpha and --rho go together")
    if len(args.alpha) != 3 or len(args.rho) != 3:
        raise UsageError("need three abscissas and three charges")
    return validate_system(args.alpha, args.rho)


def _out(args) -> Path:
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write(path: Path, text: str):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def cmd_spectrum(args) -> int:
    system = _system(args)
    out = _out(args)
    for k in args.k:
        spec = van_vleck_spectrum(system, k)
        sols = label_solutions(spec)
        _write(out / f"spectrum_k{k}.json", spectrum_to_json(spec) + "\n")
        _write(out / f"solutions_k{k}.csv", solutions_csv(sols))
        print(f"k={k}: {len(sols)} solutions -> {out / f'solutions_k{k}.csv'}")
    return 0


def _load_spectra(directory: Path, system):
    spectra = {}
    files = sorted(directory.glob("spectrum_k*.json"))
    if not files:
        raise UsageError(f"no spectrum_k*.json files in {directory}")
    for f in files:
        with open(f, encoding="utf-8") as fh:
            data = json.load(fh)
        spec = spectrum_from_dict(data, system)
        spectra[spec.k] = spec
    return spectra


def cmd_verify(args) -> int:
    claims = args.claims.split(",") if args.claims else None
    if claims and not set(claims) <= set(CLAIMS):
        raise UsageError(f"unknown claims {sorted(set(claims) - set(CLAIMS))}; choose from {', '.join(CLAIMS)}")
    if args.spectra:
        system = _system(args) if (args.config or args.alpha) else None
        spectra = _load_spectra(Path(args.spectra), system)
        system = system or next(iter(spectra.values())).system
    else:
        system = _system(args)
        spectra = {k: van_vleck_spectrum(system, k) for k in args.k}
    solutions = {k: label_solutions(s) for k, s in spectra.items()}
    tol = args.tol if args.tol is not None else WRONSKIAN_TOL
    lines, failed, total = [], 0, 0
    for rep in sweep(system, spectra, solutions, claims, wronskian_tol=tol):
        total += 1
        failed += not rep.holds
        lines.append(rep.to_json())
    out = _out(args)
    _write(out / "verify.jsonl", "\n".join(lines) + "\n")
    print(f"{total} checks, {failed} failed -> {out / 'verify.jsonl'}")
    return 1 if failed else 0


def figure1_csv(system) -> str:
    sols = {k: label_solutions(van_vleck_spectrum(system, k)) for k in (6, 7)}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "nu_6", "nu_7", "left_6", "left_7", "zeros_6", "zeros_7"])
    for j in range(1, 9):
        row = [j]
        cells = []
        for k in (6, 7):
            s = sols[k][j - 1] if j <= k + 1 else None
            cells.append(s)
        row += [fmt(s.nu) if s else "" for s in cells]
        row += [s.left_count if s else "" for s in cells]
        row += [";".join(fmt(z) for z in s.zeros) if s else "" for s in cells]
        w.writerow(row)
    return buf.getvalue()


def cmd_figure1(args) -> int:
    system = _system(args, default=FIGURE1)
    out = _out(args)
    _write(out / "figure1.csv", figure1_csv(system))
    print(f"figure1 dataset -> {out / 'figure1.csv'}")
    return 0


def _thetas(args, system) -> list:
    return args.theta if args.theta else [theta_c(system)]


def density_csv(system, nu: float, nodes: int) -> str:
    a1, a2, a3 = system.alpha
    xs = a1 + (a3 - a1) * (np.arange(nodes) + 0.5) / nodes
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "rho_V", "rho_S"])
    for x in xs:
        rv = rho_V(system, x) if x != a2 else math.nan
        w.writerow([fmt(x), fmt(rv), fmt(rho_S(system, nu, x))])
    return buf.getvalue()


def cmd_density(args) -> int:
    system = _system(args)
    out = _out(args)
    summary = {"theta_c": theta_c(system), "nu": [], "ks": None}
    for i, th in enumerate(_thetas(args, system), 1):
        nu = nu_from_theta(system, th)
        summary["nu"].append({"theta": th, "nu": nu})
        _write(out / f"density_{i}.csv", density_csv(system, nu, args.nodes))
    if args.k:
        summary["ks"] = _ladders(system, args.k, [e["theta"] for e in summary["nu"]])
    _write(out / "density.json", _dumps(summary))
    print(_dumps(summary), end="")
    return 0


def cmd_nu(args) -> int:
    system = _system(args)
    pairs = [{"theta": th, "nu": nu_from_theta(system, th)} for th in _thetas(args, system)]
    summary = {"theta_c": theta_c(system), "nu": pairs}
    _write(_out(args) / "nu.json", _dumps(summary))
    print(_dumps(summary), end="")
    return 0


def _ladders(system, ks, thetas) -> dict:
    res = {"k": list(ks), "vanvleck": [d for _, d in vanvleck_ladder(system, ks, DensityModel("vanvleck", system))]}
    res["stieltjes"] = [
        {"theta": th, "nu": nu_from_theta(system, th), "distance": [d for _, d in stieltjes_ladder(system, th, ks)]}
        for th in thetas
    ]
    return res


def cmd_ks(args) -> int:
    system = _system(args)
    ks = args.k or [16, 32, 64, 128]
    summary = _ladders(system, ks, _thetas(args, system))
    _write(_out(args) / "ks.json", _dumps(summary))
    print(_dumps(summary), end="")
    return 0


def cmd_ortho(args) -> int:
    system = _system(args, default=FIGURE1)
    thetas = args.theta if args.theta else [0.0, theta_c(system), 1.0]
    reports = [orthogonality_report(system, th, args.N, args.nodes or 64) for th in thetas]
    _write(_out(args) / "ortho.json", "[" + ",\n".join(r.to_json() for r in reports) + "]\n")
    for r in reports:
        print(r.table())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=parse_floats, help="a1,a2,a3")
    common.add_argument("--rho", type=parse_floats, help="r1,r2,r3 (all > 0)")
    common.add_argument("--config", help="TOML file with alpha = [...] and rho = [...]")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--theta", type=parse_floats, help="comma-separated zero proportions")
    common.add_argument("--nodes", type=int, help="grid points or quadrature nodes")
    common.add_argument("--tol", type=float, help="tolerance override")

    parser = argparse.ArgumentParser(prog="lamezeros", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="Van Vleck zeros and Stieltjes zeros per degree")
    p.add_argument("--k", type=parse_range, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", parents=[common], help="run the counting and interlacing predicates")
    p.add_argument("--k", type=parse_range, default=list(range(1, 13)))
    p.add_argument("--claims", help=f"comma-separated subset of {', '.join(CLAIMS)}")
    p.add_argument("--spectra", help="directory of spectrum_k*.json files to verify instead of solving")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure1", parents=[common], help="k=6,7 dataset for the reference system")
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("density", parents=[common], help="limit density tables")
    p.add_argument("--k", type=parse_range, help="optional KS ladder degrees")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("nu", parents=[common], help="map zero proportions theta to nu")
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("ks", parents=[common], help="KS distances to the limit densities")
    p.add_argument("--k", type=parse_range)
    p.set_defaults(func=cmd_ks)

    p = sub.add_parser("ortho", parents=[common], help="product orthogonality and recurrence fits")
    p.add_argument("--N", type=int, default=10)
    p.set_defaults(func=cmd_ortho)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "density" and args.nodes is None:
        args.nodes = 201
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (LameError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"lamezeros {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
