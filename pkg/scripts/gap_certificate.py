"""Print the gap instance's LP, optimum, exact LP vertex and local-search outcomes."""

import sys

from segstab.fixtures import gen_gap
from segstab.lp import solve_instance_lp
from segstab.search import brute_force_opt, local_search, restriction_k


def main():
    inst = gen_gap()
    sol = solve_instance_lp(inst, exact=True)
    sel, opt = brute_force_opt(inst)
    print(f"LP  = {sol.value:.9f}  (exact vertex: {[str(v) for v in sol.exact]})")
    print(f"OPT = {opt:g}  via {list(sel)}")
    print(f"gap = {opt / sol.value:.6f}")
    print(f"restriction profile max = {restriction_k(inst).k}")
    for t in (1, 2, 3):
        print(f"local search t={t} from all points: {local_search(inst, t=t, init=range(inst.n)).cost:g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
