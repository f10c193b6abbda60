"""Randomized mean cost / LP and derandomized cost / LP per variant on the generated corpora."""

import argparse
import sys

import numpy as np

from segstab.derand import derandomize
from segstab.fixtures import GapFamily, RandomProfile, gen_gap_family, gen_random
from segstab.lp import solve_instance_lp
from segstab.rounding import BOUNDS, trial_costs

FAMILIES = {
    "weighted": lambda s: gen_gap_family(GapFamily(weight_range=(0.5, 3.0)), s),
    "unweighted": lambda s: gen_gap_family(GapFamily(), s),
    "lines": lambda s: gen_gap_family(GapFamily(vertical_lines=True), s),
    "sparse": lambda s: gen_random(RandomProfile(npoints=16, grid=5, min_span=2, weight_range=(0.5, 3.0)), s),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=30)
    ap.add_argument("--trials", type=int, default=200)
    args = ap.parse_args(argv)

    print(f"{'variant':>10} {'family':>10} {'bound':>7} {'rand mean':>10} {'rand max':>9} {'derand max':>11}")
    for variant, family in [("weighted", "weighted"), ("weighted", "sparse"), ("unweighted", "unweighted"), ("lines", "lines")]:
        means, worst_rand, worst_det = [], 0.0, 0.0
        for s in range(args.instances):
            inst = FAMILIES[family](s)
            x = solve_instance_lp(inst)
            if x.value <= 0:
                continue
            costs = np.array([c for c, _, _ in trial_costs(inst, variant, range(args.trials), x)])
            means.append(costs.mean() / x.value)
            worst_rand = max(worst_rand, costs.max() / x.value)
            worst_det = max(worst_det, derandomize(inst, variant, x).hitting_set.cost / x.value)
        print(
            f"{variant:>10} {family:>10} {BOUNDS[variant]:7.4f} {np.mean(means):10.4f} {worst_rand:9.4f} {worst_det:11.4f}",
            flush=True,
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
