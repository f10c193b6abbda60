"""Command-line entry point: ``segstab <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import derand, fixtures, lp, model, multi, rounding, search


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def cmd_lp(args) -> int:
    inst = model.load(args.input)
    sol = lp.solve_instance_lp(inst, exact=args.exact)
    print(f"{sol.value:.9f}")
    for i, v in sol.nonzero():
        print(f"{i} {v:.9f}")
    return 0


def _solve_once(inst, args, x):
    """One run of the requested variant; returns the result document."""
    if args.variant == "multi":
        res = multi.solve_multi(inst, k=args.k, seed=args.seed, x=x, derandomize=args.derandomize)
        doc = {
            "variant": "multi",
            "cost": res.hitting_set.cost,
            "selected": list(res.hitting_set.selected),
            "lp_value": res.lp_value,
            "k": res.plan.k,
            "d": res.plan.d,
        }
        if inst.objects:
            doc["h"] = res.h
        if args.derandomize:
            doc["bound"] = res.bound
            doc["bound_satisfied"] = res.bound_satisfied
        return doc, res.hitting_set
    if args.derandomize:
        res = derand.derandomize(inst, args.variant, x)
        doc = {
            "variant": args.variant,
            "cost": res.hitting_set.cost,
            "selected": list(res.hitting_set.selected),
            "lp_value": res.lp_value,
            "bound": res.bound,
            "bound_satisfied": res.bound_satisfied,
        }
        return doc, res.hitting_set
    hs, _ = rounding.solve(inst, args.variant, seed=args.seed, x=x)
    doc = {
        "variant": args.variant,
        "cost": hs.cost,
        "selected": list(hs.selected),
        "lp_value": float(np.dot(inst.weights, rounding._xs(x))),
    }
    return doc, hs


def cmd_solve(args) -> int:
    inst = model.load(args.input)
    if args.transpose:
        inst = model.transpose(inst)
    x = lp.solve_instance_lp(inst)
    if args.trials:
        if args.variant == "multi":
            costs = [
                multi.solve_multi(inst, k=args.k, seed=[args.seed, t], x=x).hitting_set.cost for t in range(args.trials)
            ]
        else:
            costs = [c for c, _, _ in rounding.trial_costs(inst, args.variant, [[args.seed, t] for t in range(args.trials)], x)]
        for t, c in enumerate(costs):
            print(f"trial {t} cost {c:.9g}")
        mean = float(np.mean(costs))
        print(f"mean {mean:.9g}")
        print(f"mean/LP {mean / x.value:.9g}" if x.value > 0 else "mean/LP nan")
        return 0
    doc, hs = _solve_once(inst, args, x)
    if args.best and args.variant != "multi":
        other_inst = model.transpose(inst)
        other, other_hs = _solve_once(other_inst, args, lp.solve_instance_lp(other_inst))
        if other_hs.cost < hs.cost:
            doc, hs = other, other_hs
            doc["transposed"] = True
    lpv = doc["lp_value"]
    doc["ratio_vs_lp"] = doc["cost"] / lpv if lpv > 0 else None
    doc["feasible"] = model.hits_all(inst, hs.selected)
    if not args.derandomize:
        doc["seed"] = args.seed
    _emit(doc, args.output)
    return 0


def cmd_localsearch(args) -> int:
    inst = model.load(args.input)
    hs = search.local_search(inst, t=args.t)
    _emit({"cost": hs.cost, "selected": list(hs.selected), "t": args.t, "feasible": hs.feasible}, args.output)
    return 0


def cmd_oracle(args) -> int:
    inst = model.load(args.input)
    sel, cost = search.brute_force_opt(inst, cap=args.cap)
    _emit({"cost": cost, "selected": list(sel)}, args.output)
    return 0


def cmd_gen(args) -> int:
    if args.family == "gap":
        inst = fixtures.gen_gap()
    elif args.family == "grid":
        inst = fixtures.gen_grid(args.k)
    else:
        dirs = tuple(tuple(int(v) for v in d.split(",")) for d in args.directions)
        prof = fixtures.RandomProfile(npoints=args.npoints, grid=args.grid, directions=dirs, object_size=args.object_size)
        inst = fixtures.gen_random(prof, args.seed)
    model.dump(inst, args.output)
    print(f"wrote {args.output}: {inst.n} points, {len(inst.segments)} segments")
    return 0


def cmd_bench(args) -> int:
    if args.family != "grid":
        raise ValueError("only the grid family has a tightness benchmark")
    rep = fixtures.bench_tightness(args.k, args.trials, args.seed)
    text = rep.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if args.csv:
        rep.write_csv(args.csv)
    print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="segstab", description="Hitting set for points and segments via LP rounding.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lp", help="solve the LP relaxation")
    p.add_argument("--input", required=True)
    p.add_argument("--exact", action="store_true", help="rational arithmetic (small instances)")
    p.set_defaults(func=cmd_lp)

    p = sub.add_parser("solve", help="round the LP to a hitting set")
    p.add_argument("--input", required=True)
    p.add_argument("--variant", choices=[*rounding.VARIANTS, "multi"], default="weighted")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--derandomize", action="store_true")
    p.add_argument("--k", type=int, default=None, help="primary orientations for --variant multi")
    p.add_argument("--transpose", action="store_true", help="swap the roles of x and y")
    p.add_argument("--best", action="store_true", help="also try the transposed instance and keep the cheaper")
    p.add_argument("--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("localsearch", help="unweighted local search")
    p.add_argument("--input", required=True)
    p.add_argument("--t", type=int, default=3)
    p.add_argument("--output")
    p.set_defaults(func=cmd_localsearch)

    p = sub.add_parser("oracle", help="exact optimum by branch and bound")
    p.add_argument("--input", required=True)
    p.add_argument("--cap", type=int, default=search.BRUTE_CAP)
    p.add_argument("--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("--family", choices=["gap", "grid", "random"], required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--npoints", type=int, default=12)
    p.add_argument("--grid", type=int, default=6)
    p.add_argument("--directions", nargs="+", default=["1,0", "0,1"])
    p.add_argument("--object-size", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="grid tightness benchmark")
    p.add_argument("--family", default="grid")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the report JSON here")
    p.add_argument("--csv", help="write per-trial Phase-II costs here")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"segstab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
