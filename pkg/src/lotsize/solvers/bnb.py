"""Branch and bound on the setup variables.

Node relaxations are solved with the shared LP workspace. Search is
best-bound first with deterministic FIFO tie-breaking, branching on the most
fractional setup variable (ties to the earliest period). Integer candidates
are re-evaluated exactly with the fixed-pattern solver so incumbent
objectives carry no LP round-off. A cheap rounding-and-repair heuristic at
the root guarantees an incumbent exists whenever the instance is feasible,
so a time-limited run always returns its best solution so far.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, replace

import numpy as np

from ..core import (
    STATUS_OPTIMAL,
    STATUS_TIME_LIMIT,
    FixPlan,
    Instance,
    Solution,
    SolveStats,
    flow_feasible,
    infeasible_solution,
)
from .lp import LP_INFEASIBLE, LP_OPTIMAL, LpWorkspace
from .pattern import solve_for_pattern

INT_TOL = 1e-6


@dataclass(frozen=True)
class BnbOptions:
    time_limit: float | None = None
    gap_tol: float = 1e-9
    extra_cuts: tuple = ()
    incumbent_y: tuple | None = None
    root_heuristic: bool = True
    node_limit: int | None = None


def repair_pattern(inst: Instance, open_flags, scores, allowed=None) -> np.ndarray | None:
    """Open closed periods until cumulative capacity covers cumulative demand.

    Scans periods in order and, on a deficit, opens the closed period in the
    prefix with the highest score (ties to the earliest period). ``allowed``
    masks periods that may be opened. Returns None when no repair exists.
    """
    y = np.asarray(open_flags, dtype=np.int64).copy()
    scores = np.asarray(scores, dtype=np.float64)
    allowed = np.ones(inst.T, dtype=bool) if allowed is None else np.asarray(allowed, dtype=bool)
    avail = np.where(y > 0, inst.cap.astype(np.float64), 0.0)
    supply = float(inst.s0)
    need = 0.0
    for t in range(inst.T):
        supply += avail[t]
        need += float(inst.d[t])
        while supply < need:
            closed = [u for u in range(t + 1) if y[u] == 0 and allowed[u]]
            if not closed:
                return None
            pick = max(closed, key=lambda u: (scores[u], -u))
            y[pick] = 1
            avail[pick] = float(inst.cap[pick])
            supply += float(inst.cap[pick])
    return y


def _root_incumbent(inst: Instance, fixed: dict[int, int], lp_y: np.ndarray) -> Solution | None:
    rounded = (lp_y >= 0.5).astype(np.int64)
    allowed = np.ones(inst.T, dtype=bool)
    for t, v in fixed.items():
        rounded[t - 1] = v
        allowed[t - 1] = v == 1
    pattern = repair_pattern(inst, rounded, lp_y, allowed)
    if pattern is None:
        return None
    return solve_for_pattern(inst, pattern)


def branch_and_bound(
    inst: Instance, plan: FixPlan | None = None, opts: BnbOptions | None = None
) -> Solution:
    """Solve the MIP under ``plan`` fixings to the requested gap tolerance."""
    plan = plan or FixPlan.empty()
    plan.validate_for(inst.T)
    opts = opts or BnbOptions()
    t0 = time.perf_counter()
    fixed = dict(plan.entries)

    if not opts.extra_cuts and not flow_feasible(inst, plan):
        return infeasible_solution(
            inst.T, SolveStats(wall_time_seconds=time.perf_counter() - t0)
        )

    # Fast path: the plan pins every setup variable.
    if len(fixed) == inst.T:
        pattern = np.array([fixed[t + 1] for t in range(inst.T)], dtype=np.int64)
        sol = solve_for_pattern(inst, pattern)
        elapsed = time.perf_counter() - t0
        if sol is None:
            return infeasible_solution(inst.T, SolveStats(wall_time_seconds=elapsed))
        return sol.with_stats(
            SolveStats(wall_time_seconds=elapsed, mip_gap=0.0, cuts_added=len(opts.extra_cuts))
        )

    ws = LpWorkspace(inst, opts.extra_cuts)
    incumbent: Solution | None = None
    if opts.incumbent_y is not None:
        incumbent = solve_for_pattern(inst, opts.incumbent_y)

    counter = itertools.count()
    nodes_explored = 0
    root = ws.solve(fixed)
    nodes_explored += 1
    if root.status == LP_INFEASIBLE:
        return infeasible_solution(
            inst.T,
            SolveStats(
                wall_time_seconds=time.perf_counter() - t0,
                lp_solves=ws.lp_calls,
                nodes_explored=nodes_explored,
                cuts_added=len(opts.extra_cuts),
            ),
        )
    if opts.root_heuristic and incumbent is None:
        incumbent = _root_incumbent(inst, fixed, root.y)

    def upper() -> float:
        return incumbent.objective if incumbent is not None else float("inf")

    def prune_bound(u: float) -> float:
        return u - max(opts.gap_tol * abs(u), 1e-12)

    heap: list[tuple[float, int, dict[int, int]]] = []

    def process(lp_sol, node_fixed: dict[int, int]) -> None:
        nonlocal incumbent
        frac = np.minimum(lp_sol.y, 1.0 - lp_sol.y)
        free = [t for t in range(inst.T) if (t + 1) not in node_fixed]
        frac_free = [(frac[t], t) for t in free if frac[t] > INT_TOL]
        if not frac_free:
            pattern = np.round(lp_sol.y).astype(np.int64)
            for t, v in node_fixed.items():
                pattern[t - 1] = v
            cand = solve_for_pattern(inst, pattern)
            if cand is not None and cand.objective < upper():
                incumbent = cand
            return
        _, branch_t = max(frac_free, key=lambda it: (it[0], -it[1]))
        for v in (0, 1):
            child = dict(node_fixed)
            child[branch_t + 1] = v
            heapq.heappush(heap, (lp_sol.objective, next(counter), child))

    process(root, fixed)
    status = STATUS_OPTIMAL
    lower = root.objective
    while heap:
        lower = heap[0][0]
        u = upper()
        if lower >= prune_bound(u):
            break
        if opts.time_limit is not None and time.perf_counter() - t0 > opts.time_limit:
            status = STATUS_TIME_LIMIT
            break
        if opts.node_limit is not None and nodes_explored >= opts.node_limit:
            status = STATUS_TIME_LIMIT
            break
        bound, _, node_fixed = heapq.heappop(heap)
        if bound >= prune_bound(upper()):
            continue
        lp_sol = ws.solve(node_fixed)
        nodes_explored += 1
        if lp_sol.status != LP_OPTIMAL:
            continue
        if lp_sol.objective >= prune_bound(upper()):
            continue
        process(lp_sol, node_fixed)

    elapsed = time.perf_counter() - t0
    stats = SolveStats(
        wall_time_seconds=elapsed,
        nodes_explored=nodes_explored,
        lp_solves=ws.lp_calls,
        mip_gap=None,
        cuts_added=len(opts.extra_cuts),
    )
    if incumbent is None:
        base = infeasible_solution(inst.T, stats)
        if status == STATUS_TIME_LIMIT:
            # Feasibility was never disproved; only the budget ran out.
            return replace(base, status=STATUS_TIME_LIMIT)
        return base
    if status == STATUS_OPTIMAL:
        gap = 0.0
    else:
        u = upper()
        gap = max(0.0, (u - lower) / max(abs(u), 1e-12))
    return replace(incumbent, status=status, stats=replace(stats, mip_gap=gap))
