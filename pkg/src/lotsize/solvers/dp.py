"""Forward dynamic program over (period, ending inventory) states.

Exact for integer demand and capacity. Inventory states are bounded above by
the remaining demand (plus any initial stock that cannot yet have been
consumed), which gives the classical O(T * D^2) transition count where D is
the total demand. The per-period transition table is vectorized over
(new state, previous state) pairs.
"""

from __future__ import annotations

import time

import numpy as np

from ..core import Instance, Solution, SolveStats, STATUS_OPTIMAL, infeasible_solution
from ..errors import ResourceLimitError, ValidationError

DP_TRANSITION_BUDGET = 500_000_000


def solve_dp(inst: Instance) -> Solution:
    """Exact optimum via inventory-state dynamic programming."""
    d = inst.d
    cap = inst.cap
    if np.any(d != np.floor(d)) or np.any(cap != np.floor(cap)):
        raise ValidationError("dynamic program requires integer demand and capacity")
    T = inst.T
    t0 = time.perf_counter()

    cum_d = np.cumsum(d)
    total = int(cum_d[-1])
    remaining = total - cum_d
    # Upper bound on ending inventory per period: future demand plus initial
    # stock not yet drawn down.
    bounds = [int(remaining[t] + max(0, inst.s0 - cum_d[t])) for t in range(T)]
    transitions = sum(
        (bounds[t] + 1) * ((bounds[t - 1] if t > 0 else 0) + 1) for t in range(T)
    )
    if transitions > DP_TRANSITION_BUDGET:
        raise ResourceLimitError(
            f"dynamic program would need {transitions:.2e} transitions; "
            "use a smaller-demand preset"
        )

    prev_states = np.array([inst.s0], dtype=np.int64)
    prev_cost = np.zeros(1)
    parents: list[np.ndarray] = []
    state_lists: list[np.ndarray] = [prev_states]
    for t in range(T):
        new_states = np.arange(bounds[t] + 1, dtype=np.int64)
        # q[i, j]: production needed to move from prev state j to new state i.
        q = new_states[:, None] + int(d[t]) - prev_states[None, :]
        valid = (q >= 0) & (q <= int(cap[t]))
        cost = np.where(
            valid,
            prev_cost[None, :]
            + inst.p[t] * q
            + np.where(q > 0, inst.f[t], 0.0)
            + inst.h[t] * new_states[:, None],
            np.inf,
        )
        parent = np.argmin(cost, axis=1)
        prev_cost = cost[np.arange(len(new_states)), parent]
        prev_states = new_states
        parents.append(parent.astype(np.int32))
        state_lists.append(new_states)

    if not np.isfinite(prev_cost).any():
        return infeasible_solution(T, SolveStats(wall_time_seconds=time.perf_counter() - t0))

    s = np.zeros(T)
    x = np.zeros(T)
    y = np.zeros(T, dtype=np.int64)
    idx = int(np.argmin(prev_cost))
    objective = float(prev_cost[idx])
    for t in range(T - 1, -1, -1):
        s[t] = float(state_lists[t + 1][idx])
        idx = int(parents[t][idx])
        prev = float(state_lists[t][idx])
        x[t] = s[t] + float(d[t]) - prev
        y[t] = 1 if x[t] > 0 else 0
    elapsed = time.perf_counter() - t0
    return Solution(
        x=x, s=s, y=y, objective=objective, status=STATUS_OPTIMAL,
        stats=SolveStats(wall_time_seconds=elapsed, mip_gap=0.0),
    )
