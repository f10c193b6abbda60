"""Mean cost / LP of the d-orientation algorithm as the number k of primary orientations varies."""

import argparse
import sys

import numpy as np

from segstab.fixtures import RandomProfile, gen_random
from segstab.lp import solve_instance_lp
from segstab.multi import choose_k, master_bound, solve_multi

DIRS = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--trials", type=int, default=200)
    args = ap.parse_args(argv)
    if not 2 <= args.d <= len(DIRS):
        ap.error(f"--d must be in [2, {len(DIRS)}]")

    prof = RandomProfile(npoints=18, grid=5, directions=DIRS[: args.d], min_span=2, max_span=2, density=0.9, weight_range=(0.5, 3.0))
    insts = [gen_random(prof, s) for s in range(args.instances)]
    xs = [solve_instance_lp(i) for i in insts]
    print(f"d={args.d}, default k={choose_k(args.d)}")
    print(f"{'k':>2} {'factor':>8} {'mean/LP':>8} {'max/LP':>8} {'derand/LP':>10}")
    for k in range(1, args.d + 1):
        ratios, worst, det = [], 0.0, 0.0
        for inst, x in zip(insts, xs):
            if x.value <= 0:
                continue
            costs = [solve_multi(inst, k=k, seed=t, x=x, check=False).hitting_set.cost for t in range(args.trials)]
            ratios.append(np.mean(costs) / x.value)
            worst = max(worst, max(costs) / x.value)
            det = max(det, solve_multi(inst, k=k, x=x, derandomize=True).hitting_set.cost / x.value)
        print(f"{k:>2} {master_bound(args.d, k):8.4f} {np.mean(ratios):8.4f} {worst:8.4f} {det:10.4f}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
