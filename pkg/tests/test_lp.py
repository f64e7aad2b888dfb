import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lotsize import FixPlan, Instance, flow_feasible
from lotsize.errors import UndefinedGapError
from lotsize.solvers import compute_igap, solve_lp
from lotsize.solvers.lp import LP_INFEASIBLE, LP_OPTIMAL

from conftest import random_small_instance


class TestSolveLp:
    def test_relaxation_bounds_e1(self, e1):
        lp = solve_lp(e1)
        assert lp.status == LP_OPTIMAL
        assert lp.objective <= 17.0 + 1e-7

    def test_plan_infeasibility_matches_flow_test(self, e1):
        assert solve_lp(e1, FixPlan({2: 0})).status == LP_INFEASIBLE

    def test_single_period_by_hand(self):
        inst = Instance(T=1, d=[5], p=[1], f=[2], h=[1], cap=[10])
        lp = solve_lp(inst)
        assert lp.status == LP_OPTIMAL
        assert lp.objective == pytest.approx(6.0, abs=1e-7)
        assert lp.y[0] == pytest.approx(0.5, abs=1e-7)

    def test_constraints_hold_at_optimum(self, e1):
        lp = solve_lp(e1)
        s_prev = np.concatenate([[0.0], lp.s[:-1]])
        assert np.allclose(s_prev + lp.x - e1.d, lp.s, atol=1e-7)
        assert np.all(lp.x <= lp.y * e1.cap + 1e-7)
        assert np.all(lp.y >= -1e-7) and np.all(lp.y <= 1 + 1e-7)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 100_000), data=st.data())
    def test_infeasible_iff_flow_infeasible(self, seed, data):
        inst = random_small_instance(np.random.default_rng(seed))
        zeros = data.draw(
            st.lists(st.integers(1, inst.T), unique=True, min_size=0, max_size=inst.T)
        )
        plan = FixPlan({t: 0 for t in zeros})
        lp = solve_lp(inst, plan)
        assert (lp.status == LP_INFEASIBLE) == (not flow_feasible(inst, plan))


class TestComputeIgap:
    def test_benchmark_scale_value(self):
        assert compute_igap(100.0, 92.5) == pytest.approx(7.5)

    def test_equal_bounds(self):
        assert compute_igap(42.0, 42.0) == 0.0

    def test_e1_gap_in_range(self, e1):
        lp = solve_lp(e1)
        gap = compute_igap(17.0, lp.objective)
        assert 0.0 <= gap < 100.0

    def test_zero_mip_objective(self):
        with pytest.raises(UndefinedGapError):
            compute_igap(0.0, 0.0)
