"""Hitting points-on-segments instances by LP rounding, with exact oracles."""

from .derand import BoundViolation, conditional_cost, derandomize
from .fixtures import RandomProfile, bench_tightness, gen_gap, gen_grid, gen_random
from .lp import LpSolution, solve_instance_lp, solve_lp
from .model import HORIZONTAL, VERTICAL, Direction, Instance, hits_all, load, parse, validate
from .multi import choose_k, reduce_union_objects, solve_multi
from .onedim import OneDimInstance, brute_1d, solve_1d
from .rounding import HittingSet, solve
from .search import brute_force_opt, local_search, restriction_k

__all__ = [
    "BoundViolation",
    "conditional_cost",
    "derandomize",
    "RandomProfile",
    "bench_tightness",
    "gen_gap",
    "gen_grid",
    "gen_random",
    "LpSolution",
    "solve_instance_lp",
    "solve_lp",
    "HORIZONTAL",
    "VERTICAL",
    "Direction",
    "Instance",
    "hits_all",
    "load",
    "parse",
    "validate",
    "choose_k",
    "reduce_union_objects",
    "solve_multi",
    "OneDimInstance",
    "brute_1d",
    "solve_1d",
    "HittingSet",
    "solve",
    "brute_force_opt",
    "local_search",
    "restriction_k",
]
__version__ = "0.1.0"
