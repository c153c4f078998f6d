"""Command-line interface: aggregate profiles, check axioms, compute
bound curves, sample cultures, embed, and run the bundled experiments.

Exit codes: 0 success, 2 usage error, 3 capacity guard, 4 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .core import Profile, as_ranking, swap_distance
from .errors import DataError, GuardError, RankfairError
from .solver import CostSpec, emit_ilp, solve, solve_brute_force
from . import __version__

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_DATA = 4


def _load_profile(path: str, normalize: bool = False) -> Profile:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e
    return Profile.from_json(text, normalize=normalize)


def _emit(doc: dict, out: str | None):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ranking_str(r, labels=None):
    if labels:
        return " > ".join(labels[a] for a in r)
    return " > ".join(str(a) for a in r)


def cmd_aggregate(args) -> int:
    profile = _load_profile(args.profile, args.normalize)
    p = 1 if args.rule == "kemeny" else (2 if args.rule == "sqk" else int(args.power))
    spec = CostSpec(p)
    if args.emit_ilp:
        Path(args.emit_ilp).write_text(emit_ilp(profile, spec))
    res = solve(profile, spec, method=args.method)
    doc = {
        "rule": {1: "kemeny", 2: "sqk"}.get(p, f"power-{p}"),
        "status": res.status,
        "method": res.method,
        "cost": str(res.cost),
        "winners": [list(r) for r in res.winners],
        "ties_complete": res.ties_complete,
        "per_input_distances": {
            " ".join(map(str, r)): swap_distance(r, res.winner)
            for r in profile.support()
        },
    }
    if res.status != "Exact":
        doc["lower_bound"] = str(res.lower_bound)
        doc["gap"] = str(res.cost - res.lower_bound)
    for r in res.winners:
        print(_ranking_str(r, profile.labels))
    print(f"cost {res.cost} ({res.status.lower()})")
    _emit(doc, args.out)
    return EXIT_OK


def cmd_axioms(args) -> int:
    import itertools

    from . import axioms
    from .core import enumerate_rankings
    from .sampling import CultureSpec, make_rng, sample_profile

    checked = 0
    passed = 0
    counterexamples = []
    if args.profile:
        profiles = [_load_profile(args.profile)]
    else:
        profiles = []
        rng = make_rng(args.seed)
        for k in range(args.random):
            if args.check == "2rp":
                r1 = tuple(rng.permutation(args.m))
                r2 = tuple(rng.permutation(args.m))
                while r2 == r1:
                    r2 = tuple(rng.permutation(args.m))
                w = Fraction(int(rng.integers(1, 100)), 100)
                profiles.append(Profile.from_weights({r1: w, r2: 1 - w}))
            else:
                spec = CultureSpec("ic", n=6, m=args.m, seed=args.seed + k)
                profiles.append(sample_profile(spec))
    for prof in profiles:
        checked += 1
        if args.check == "2rp":
            ok = axioms.sqk_satisfies_2rp(prof)
        elif args.check == "scp":
            seq = axioms.find_single_crossing_order(prof)
            if seq is None:
                ok = True  # vacuous for profiles that are not single-crossing
            else:
                expected = axioms.sc_proportional_expected(prof, seq)
                ok = set(solve_brute_force(prof).winners) <= expected
        elif args.check == "efficiency":
            winners = solve_brute_force(prof).winners
            ok = all(
                not axioms.dominates(other, w, prof)
                for w in winners
                for other in enumerate_rankings(prof.m)
            )
        elif args.check == "participation":
            other = sample_profile(
                CultureSpec("ic", n=4, m=prof.m, seed=args.seed + 777)
            )
            ok = axioms.check_participation_instance(prof, other, Fraction(1, 2))
        else:
            raise DataError(f"unknown check {args.check!r}")
        if ok:
            passed += 1
        else:
            counterexamples.append(prof.to_json())
    _emit(
        {"check": args.check, "checked": checked, "passed": passed,
         "counterexamples": counterexamples},
        args.out,
    )
    return EXIT_OK


def cmd_bounds(args) -> int:
    import csv

    from .bounds import alpha_curve, lower_bound_curve, worst_group_curve
    from .embed import render_curve_svg

    grid = [k / args.grid for k in range(args.grid + 1)] if args.grid else None
    if args.curve == "single":
        curve = alpha_curve(args.m)
    elif args.curve == "group":
        curve = worst_group_curve(args.m, grid)
    else:
        curve = lower_bound_curve(args.m, grid)
    rows = [[f"{a:.6f}", f"{v:.6f}"] for a, v in curve.points]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha", "value"])
            w.writerows(rows)
    else:
        print("alpha,value")
        for a, v in rows:
            print(f"{a},{v}")
    if args.svg:
        Path(args.svg).write_text(render_curve_svg({curve.kind: list(curve.points)}))
    return EXIT_OK


def cmd_sample(args) -> int:
    from .sampling import CultureSpec, parse_preflib, restrict_profile, sample_profile, make_rng

    if args.preflib:
        try:
            text = Path(args.preflib).read_text()
        except OSError as e:
            raise DataError(f"cannot read {args.preflib}: {e}") from e
        profile = parse_preflib(text)
        if args.restrict:
            rng = make_rng(args.seed)
            keep = sorted(rng.choice(profile.m, size=args.restrict, replace=False).tolist())
            profile = restrict_profile(profile, keep)
    else:
        params = {}
        if args.phi is not None:
            params["phi"] = args.phi
        spec = CultureSpec(args.culture, n=args.n, m=args.m, seed=args.seed, params=params)
        profile = sample_profile(spec)
    text = profile.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_embed(args) -> int:
    import numpy as np

    from .embed import (
        classical_mds,
        distance_matrix,
        fit_point_for_ranking,
        render_map_svg,
    )
    from .sampling import PointConfig
    from .solver import solve

    if args.fit:
        doc = json.loads(Path(args.fit).read_text())
        cfg = PointConfig(doc.get("voters", []), doc["alternatives"])
        target = as_ranking(json.loads(args.target))
        point, achieved, defect = fit_point_for_ranking(cfg, target)
        _emit(
            {"point": [float(x) for x in point], "achieved": list(achieved),
             "defect": defect},
            args.out,
        )
        return EXIT_OK
    profile = _load_profile(args.map)
    rules = args.with_rules.split(",") if args.with_rules else ["sqk", "kemeny"]
    marks = {}
    rankings = profile.support()
    for rule in rules:
        p = {"sqk": 2, "kemeny": 1}.get(rule)
        if p is None:
            raise DataError(f"unknown rule {rule!r}")
        winners = solve(profile, CostSpec(p)).winners
        for r in winners:
            if r not in rankings:
                rankings.append(r)
        marks["sqk" if p == 2 else "kemeny"] = [rankings.index(r) for r in winners]
    emb = classical_mds(distance_matrix(rankings))
    weights = [float(profile.weight(r)) for r in rankings]
    svg = render_map_svg(emb.coords, weights, marks)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_experiment(args) -> int:
    from .experiments import EXPERIMENTS, ExperimentSpec, run_experiment

    params = {}
    for kv in args.param or []:
        if "=" not in kv:
            raise DataError(f"--param expects key=value, got {kv!r}")
        k, v = kv.split("=", 1)
        params[k] = v
    spec = ExperimentSpec(
        name=args.name, out_dir=args.out or "out", seed=args.seed, params=params
    )
    manifest = run_experiment(spec)
    print(json.dumps(manifest["report"], indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rankfair",
        description="Rank aggregation by linear or squared swap-distance cost.",
    )
    ap.add_argument("--version", action="version", version=f"rankfair {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--threads", type=int, default=1, help="reserved; single-threaded")
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("aggregate", help="compute optimal rankings for a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--rule", choices=["sqk", "kemeny", "power"], default="sqk")
    p.add_argument("--power", type=int, default=2, help="exponent for --rule power")
    p.add_argument("--method", choices=["auto", "brute_force", "kemeny_dp", "bnb"],
                   default="auto")
    p.add_argument("--normalize", action="store_true",
                   help="rescale weights to sum to 1")
    p.add_argument("--emit-ilp", metavar="FILE",
                   help="also write the integer program in LP format")
    common(p)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("axioms", help="run axiom instance checks")
    p.add_argument("--check", required=True,
                   choices=["2rp", "scp", "efficiency", "participation"])
    p.add_argument("--profile")
    p.add_argument("--random", type=int, default=0, help="number of random profiles")
    p.add_argument("--m", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("bounds", help="compute worst-case curves")
    p.add_argument("--curve", required=True, choices=["single", "group", "lower"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--grid", type=int, default=0, help="grid steps for q")
    p.add_argument("--svg", help="also render the curve as SVG")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sample", help="sample a profile from a culture")
    p.add_argument("--culture",
                   choices=["mallows", "mixture", "disc", "circle", "gaussians", "ic"],
                   default="ic")
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--phi", type=float)
    p.add_argument("--preflib", help="parse a strict-order PrefLib file instead")
    p.add_argument("--restrict", type=int,
                   help="keep this many random alternatives of a PrefLib profile")
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("embed", help="plane embeddings and point fitting")
    p.add_argument("--map", help="profile JSON to embed as a map")
    p.add_argument("--with-rules", default="sqk,kemeny")
    p.add_argument("--fit", help="JSON file with alternatives (and voters) to fit")
    p.add_argument("--target", help="JSON ranking for --fit")
    common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("experiment", help="run a bundled experiment")
    p.add_argument("--name", required=True)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    common(p)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if e.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except GuardError as e:
        print(f"guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (DataError, RankfairError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
