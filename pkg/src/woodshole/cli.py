"""Command-line entry point.

    woodshole fixed-points ENDO.json
    woodshole verify {lefschetz,guillot,ej,baum-bott,camacho-sad,cs-woodshole,all} FILE
    woodshole random {endo,vf} --d D [--n N] [--seed S] [-o OUT]

Exit codes: 0 all relations pass, 1 a relation fails, 2 input error,
3 numerical failure or violated hypothesis.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import foliation as fol
from . import report as rep
from .errors import InputError, WoodsHoleError
from .indices import (
    InvariantPolySpec,
    fixed_point_count,
    guillot_lhs_term,
    guillot_rhs,
    lefschetz_rhs,
    sigmas,
    woods_hole_term,
)
from .instances import random_endo, random_generic_field
from .polyalg import MultiPoly
from .projgeom import ProjEndo
from .solver import PathTrackerConfig, fixed_points

TARGETS = ("lefschetz", "guillot", "ej", "baum-bott", "camacho-sad", "cs-woodshole", "all")
ENDO_TARGETS = ("lefschetz", "guillot")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_endo(path: str) -> ProjEndo:
    data = _load_json(path)
    if not isinstance(data, dict) or "components" not in data:
        raise InputError(f"{path} is not an endomorphism file")
    return ProjEndo.from_json(data)


def load_field(path: str) -> fol.PlaneVectorField:
    data = _load_json(path)
    if not isinstance(data, dict) or "P" not in data or "Q" not in data:
        raise InputError(f"{path} is not a vector-field file")
    return fol.PlaneVectorField.from_json(data)


def load_invariant(path: str) -> InvariantPolySpec:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path} is not an invariant-polynomial file")
    return InvariantPolySpec.from_json(data)


def load_radial_factor(path: str) -> MultiPoly:
    data = _load_json(path)
    try:
        return MultiPoly.from_terms(data, num_vars=3)
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed g polynomial in {path}: {exc}") from exc


# -- suites ------------------------------------------------------------------

def lefschetz_entries(f: ProjEndo, records, tol: float):
    n, d = f.n, f.degree
    out = []
    for k in range(n + 1):
        terms = [woods_hole_term(r.jacobian, k) for r in records]
        out.append(rep.make_entry(rep.LEFSCHETZ, f"k={k}", terms, lefschetz_rhs(n, d, k), tol))
    return out


def guillot_entries(f: ProjEndo, records, invariants, tol: float):
    out = []
    for B in invariants:
        if B.n != f.n:
            raise InputError(f"invariant polynomial is for n={B.n}, map is on P^{f.n}")
        terms = [guillot_lhs_term(r.jacobian, B) for r in records]
        out.append(rep.make_entry(rep.GUILLOT, f"B={B.label()}", terms, guillot_rhs(B, f.degree), tol))
    return out


def _invariants(args, n: int):
    if args.invariant:
        return [load_invariant(args.invariant)]
    return InvariantPolySpec.all_monic(n)


def _config(args) -> PathTrackerConfig:
    return PathTrackerConfig(seed=args.seed, max_paths=args.max_paths)


def cmd_fixed_points(args) -> tuple[dict, str, int]:
    f = load_endo(args.file)
    cfg = _config(args)
    t0 = time.perf_counter()
    records = fixed_points(f, cfg, np.random.default_rng(cfg.seed))
    elapsed = time.perf_counter() - t0
    expected = fixed_point_count(f.n, f.degree)
    points = []
    lines = [f"fixed points of a degree-{f.degree} endomorphism of P^{f.n}"]
    for i, r in enumerate(records):
        s = sigmas(r.jacobian)
        points.append({"coords": list(r.point.coords), "chart": r.chart, "sigma": s,
                       "det_IminusJ": r.det_IminusJ, "newton_residual": r.newton_residual,
                       "transversal": r.transversal})
        coords = ", ".join(f"{c:.8g}" for c in r.point.coords)
        sig = ", ".join(f"{c:.8g}" for c in s[1:])
        lines.append(f"  {i:>3}  [{coords}]  sigma=({sig})  det(I-J)={r.det_IminusJ:.8g}")
    ok = len(records) == expected
    lines.append(f"census: {len(records)} found, {expected} expected  {'PASS' if ok else 'FAIL'}")
    lines.append(f"wall time {elapsed:.2f} s")
    data = rep.to_jsonable({"command": "fixed-points", "n": f.n, "degree": f.degree, "seed": cfg.seed,
                            "config": cfg.echo(), "points": points,
                            "census": {"found": len(records), "expected": expected, "pass": ok}})
    return data, "\n".join(lines), 0 if ok else 1


def run_verify(target: str, path: str, cfg: PathTrackerConfig, tol: float = rep.DEFAULT_TOL,
               invariants=None, g: MultiPoly | None = None) -> rep.VerificationReport:
    rng = np.random.default_rng(cfg.seed)
    t0 = time.perf_counter()
    entries = []
    extra = {"target": target}
    if target in ENDO_TARGETS:
        f = load_endo(path)
        records = fixed_points(f, cfg, rng)
        if target == "lefschetz":
            entries += lefschetz_entries(f, records, tol)
        else:
            entries += guillot_entries(f, records, invariants or InvariantPolySpec.all_monic(f.n), tol)
    else:
        v = load_field(path)
        if target in ("ej", "all"):
            zeros = fol._require_ej(v, cfg, rng)
            entries.append(fol.verify_ej1(v, tol=tol, zeros=zeros))
            entries.append(fol.verify_ej2(v, tol=tol, zeros=zeros))
        if target in ("baum-bott", "camacho-sad", "all"):
            sings = fol.singularities(v, cfg, rng)
            if target in ("baum-bott", "all"):
                entries.append(fol.verify_bb(v, tol=tol, sings=sings))
            if target in ("camacho-sad", "all"):
                entries.append(fol.verify_cs(v, tol=tol, sings=sings))
        if target in ("cs-woodshole", "all"):
            entries += fol.verify_cs_woodshole(v, g, cfg, rng, tol)
        if target == "all":
            f = fol.build_fv(v, cfg, rng)
            records = fixed_points(f, cfg, rng)
            entries += lefschetz_entries(f, records, tol)
            entries += guillot_entries(f, records, invariants or InvariantPolySpec.all_monic(2), tol)
    report = rep.VerificationReport(entries, cfg.seed, {**cfg.echo(), "tol": tol}, extra=extra)
    report.wall_time = time.perf_counter() - t0
    return report


def cmd_verify(args) -> tuple[dict, str, int]:
    cfg = _config(args)
    invariants = None
    if args.target in ("guillot", "all") and args.invariant:
        invariants = [load_invariant(args.invariant)]
    g = None
    if args.g and args.g != "random":
        g = load_radial_factor(args.g)
    report = run_verify(args.target, args.file, cfg, args.tol, invariants, g)
    return report.to_json(), rep.format_report(report), 0 if report.passed else 1


def cmd_random(args) -> tuple[dict, str, int]:
    rng = np.random.default_rng(args.seed)
    if args.kind == "endo":
        data = random_endo(args.n, args.d, rng).to_json()
        data["meta"] = {"seed": args.seed}
    else:
        if args.n not in (None, 2):
            raise InputError("vector fields live on C^2; --n must be 2 or omitted")
        v, rejections = random_generic_field(args.d, rng, PathTrackerConfig(seed=args.seed))
        data = v.to_json()
        data["meta"] = {"seed": args.seed, "rejections": rejections}
    text = json.dumps(data, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        return data, f"wrote {args.output}", 0
    return data, text.rstrip("\n"), 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="woodshole", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all random choices")
    common.add_argument("--tol", type=float, default=rep.DEFAULT_TOL,
                        help="tolerance relative to max(1, |rhs|)")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--max-paths", type=int, default=100_000, dest="max_paths")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixed-points", parents=[common], help="list the fixed points of an endomorphism")
    p.add_argument("file")
    p.set_defaults(func=cmd_fixed_points)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("target", choices=TARGETS)
    p.add_argument("file")
    p.add_argument("--invariant", help="invariant polynomial file for the guillot suite")
    p.add_argument("--g", default="random", help="radial factor: polynomial file or 'random'")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="write a random instance")
    p.add_argument("kind", choices=("endo", "vf"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_random, json=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "random" and args.kind == "endo" and args.n is None:
        args.n = 2
    try:
        if args.command == "random" and not (1 <= args.d <= 3 and (args.n is None or 1 <= args.n <= 3)):
            raise InputError("random instances need 1 <= n <= 3 and 1 <= d <= 3")
        data, text, code = args.func(args)
    except WoodsHoleError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    if args.json:
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
