"""Valid-inequality separation for fractional relaxation points.

For a prefix ``1..ell`` and a subset ``S`` of it, total production in ``S``
is bounded by the demand each setup could still serve through ``ell`` plus
the inventory left at ``ell``:

    sum_{t in S} x_t <= sum_{t in S} d_{t,ell} * y_t + s_ell

with ``d_{t,ell}`` the demand from ``t`` through ``ell``. The most violated
subset for a given point keeps exactly the periods where ``x_t`` exceeds
``d_{t,ell} * y_t``, so separation is a linear scan per prefix.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from ..core import FixPlan, Instance, Solution, SolveStats
from ..errors import ValidationError
from .bnb import BnbOptions, branch_and_bound
from .lp import LP_OPTIMAL, LpSolution, LpWorkspace

SEPARATION_TOL = 1e-6
DEFAULT_ROUNDS = 5


@dataclass(frozen=True)
class LsCut:
    """One separated inequality, with its demand coefficients cached."""

    ell: int
    set_S: tuple[int, ...]
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if not self.set_S:
            raise ValidationError("cut subset must be non-empty")
        if any(t > self.ell for t in self.set_S):
            raise ValidationError("cut subset must lie within the prefix")

    def violation(self, x, y, s) -> float:
        """Left side minus right side at a point; positive means violated."""
        lhs = sum(x[t - 1] for t in self.set_S)
        rhs = sum(c * y[t - 1] for t, c in zip(self.set_S, self.coeffs)) + s[self.ell - 1]
        return float(lhs - rhs)


def separate_ls_cuts(
    inst: Instance, lp: LpSolution, tol: float = SEPARATION_TOL
) -> list[LsCut]:
    """All violated prefix inequalities at an LP point, at most one per prefix."""
    if lp.status != LP_OPTIMAL:
        raise ValidationError("separation requires an optimal relaxation point")
    cuts: list[LsCut] = []
    cum = np.concatenate([[0.0], np.cumsum(inst.d)])
    for ell in range(1, inst.T + 1):
        members = []
        coeffs = []
        slack = 0.0
        for t in range(1, ell + 1):
            d_tl = cum[ell] - cum[t - 1]
            margin = lp.x[t - 1] - d_tl * lp.y[t - 1]
            if margin > 0:
                members.append(t)
                coeffs.append(float(d_tl))
                slack += margin
        if members and slack - lp.s[ell - 1] > tol:
            cuts.append(LsCut(ell=ell, set_S=tuple(members), coeffs=tuple(coeffs)))
    return cuts


def root_cut_loop(
    inst: Instance,
    rounds: int = DEFAULT_ROUNDS,
    tol: float = SEPARATION_TOL,
    plan: FixPlan | None = None,
) -> tuple[list[LsCut], list[float]]:
    """Iterate separation at the root; returns the pool and per-round bounds."""
    if rounds < 1:
        raise ValidationError("at least one separation round is required")
    plan = plan or FixPlan.empty()
    pool: list[LsCut] = []
    seen: set[tuple[int, tuple[int, ...]]] = set()
    bounds: list[float] = []
    for _ in range(rounds):
        lp = LpWorkspace(inst, tuple(pool)).solve(dict(plan.entries))
        if lp.status != LP_OPTIMAL:
            break
        bounds.append(lp.objective)
        fresh = [
            c
            for c in separate_ls_cuts(inst, lp, tol)
            if (c.ell, c.set_S) not in seen
        ]
        if not fresh:
            break
        for c in fresh:
            seen.add((c.ell, c.set_S))
        pool.extend(fresh)
    return pool, bounds


def solve_with_ls_cuts(
    inst: Instance,
    rounds: int = DEFAULT_ROUNDS,
    opts: BnbOptions | None = None,
    plan: FixPlan | None = None,
) -> Solution:
    """Root cutting loop followed by branch and bound over the cut pool."""
    t0 = time.perf_counter()
    opts = opts or BnbOptions()
    pool, bounds = root_cut_loop(inst, rounds, SEPARATION_TOL, plan)
    sol = branch_and_bound(inst, plan, replace(opts, extra_cuts=tuple(pool)))
    stats = sol.stats
    return sol.with_stats(
        SolveStats(
            wall_time_seconds=time.perf_counter() - t0,
            nodes_explored=stats.nodes_explored,
            lp_solves=stats.lp_solves + len(bounds),
            mip_gap=stats.mip_gap,
            cuts_added=len(pool),
        )
    )
