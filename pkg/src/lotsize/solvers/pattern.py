"""Exact evaluation of a fully fixed setup pattern.

With the setup vector fixed, the remaining problem in ``x`` and ``s`` is a
transportation LP on a path. Substituting the inventory balance turns it into
``min sum_u (p_u + H_u) * x_u`` subject to cumulative production covering
cumulative net demand, where ``H_u`` is the holding cost from period ``u`` to
the end of the horizon. Deficits are processed in period order and each one
has a superset of the sources available to earlier deficits, so serving every
deficit from the cheapest open period with spare capacity is optimal.
"""

from __future__ import annotations

import numpy as np

from ..core import Instance, Solution, SolveStats, STATUS_OPTIMAL, objective_value


def solve_for_pattern(inst: Instance, pattern) -> Solution | None:
    """Optimal production for a 0/1 setup vector, or None if infeasible."""
    T = inst.T
    y = np.asarray(pattern, dtype=np.int64)
    ub = np.where(y > 0, inst.cap.astype(np.float64), 0.0)
    # Effective unit cost of producing in u, holding folded in.
    suffix_h = np.cumsum(inst.h[::-1])[::-1]
    unit_cost = inst.p + suffix_h
    order = np.lexsort((np.arange(T), unit_cost))

    cum_d = np.cumsum(inst.d)
    x = np.zeros(T)
    produced = 0.0
    for k in range(T):
        need = cum_d[k] - inst.s0
        if produced >= need:
            continue
        deficit = need - produced
        for u in order:
            if u > k:
                continue
            room = ub[u] - x[u]
            if room <= 0:
                continue
            take = min(room, deficit)
            x[u] += take
            produced += take
            deficit -= take
            if deficit <= 0:
                break
        if deficit > 0:
            return None
    s = inst.s0 + np.cumsum(x) - cum_d
    obj = objective_value(inst, x, y, s)
    return Solution(x=x, s=s, y=y, objective=obj, status=STATUS_OPTIMAL, stats=SolveStats())
