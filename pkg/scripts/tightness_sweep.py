"""Empirical Phase-II / OPT on the grid family for k = 3..7 against the analytic sandwich."""

import argparse
import csv
import sys

from segstab.fixtures import bench_tightness


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmin", type=int, default=3)
    ap.add_argument("--kmax", type=int, default=6)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", help="write one summary row per k here")
    args = ap.parse_args(argv)

    rows = []
    print(f"{'k':>2} {'alpha':>8} {'lower':>8} {'empirical':>10} {'3sigma':>8} {'exact':>8} {'upper':>8}  inside")
    for k in range(args.kmin, args.kmax + 1):
        r = bench_tightness(k, args.trials, args.seed)
        rows.append(r)
        print(
            f"{k:>2} {r.alpha:8.5f} {r.lower:8.5f} {r.empirical:10.5f} {3 * r.sigma:8.5f} "
            f"{r.expected:8.5f} {r.upper:8.5f}  {r.inside()}",
            flush=True,
        )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "alpha", "lower", "empirical", "sigma", "expected", "upper", "trials"])
            for r in rows:
                w.writerow([r.k, r.alpha, r.lower, r.empirical, r.sigma, r.expected, r.upper, r.trials])
    return 0 if all(r.inside() for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
