from .bnb import BnbOptions, branch_and_bound, repair_pattern
from .brute import brute_force
from .cuts import LsCut, root_cut_loop, separate_ls_cuts, solve_with_ls_cuts
from .dp import solve_dp
from .lp import LpSolution, LpWorkspace, compute_igap, solve_lp
from .pattern import solve_for_pattern

__all__ = [
    "BnbOptions",
    "LpSolution",
    "LpWorkspace",
    "LsCut",
    "branch_and_bound",
    "brute_force",
    "compute_igap",
    "repair_pattern",
    "root_cut_loop",
    "separate_ls_cuts",
    "solve_dp",
    "solve_for_pattern",
    "solve_lp",
    "solve_with_ls_cuts",
]
