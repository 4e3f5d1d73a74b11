import numpy as np
import pytest

from feeddrive.core.errors import ReferenceWindowError, SynthesisError
from feeddrive.gpc.carima import CarimaModel, lag_integrator_model
from feeddrive.gpc.online import nominal_cost, simulate_online_nominal, simulate_rst_nominal
from feeddrive.gpc.rst import RstController, RstHistory, rst_tick
from feeddrive.gpc.synthesis import GpcTuning, stability_margins, synthesize_rst


INTEGRATOR = CarimaModel(a=[1.0, -1.0], b=[0.0, 1.0], t_sp=0.006)
LAG = lag_integrator_model(0.0025, 0.006)

TUNINGS = [
    GpcTuning(),
    GpcTuning(n1=1, n2=15, nu=1, lam=0.05),
    GpcTuning(n1=2, n2=12, nu=4, lam=1.0),
    GpcTuning(n1=1, n2=5, nu=5, lam=0.0),
]


def _test_reference(n: int = 200) -> np.ndarray:
    k = np.arange(n)
    return 0.5 * np.sin(2 * np.pi * k / 80.0) + np.where(k > 40, 1.0, 0.0) + 0.01 * k


class TestGpcTuning:
    def test_defaults(self):
        t = GpcTuning()
        assert (t.n1, t.n2, t.nu, t.lam) == (1, 30, 30, 100.0)

    @pytest.mark.parametrize("kwargs", [{"n1": 0}, {"n1": 5, "n2": 4}, {"n2": 10, "nu": 11}, {"lam": -1.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GpcTuning(**kwargs)

    def test_sort_key_order(self):
        assert GpcTuning(n1=2, n2=10, nu=3, lam=0.5).sort_key() == (10, 3, 0.5, 2)


class TestSynthesizeRst:
    def test_integrator_dead_beat(self):
        rst = synthesize_rst(INTEGRATOR, GpcTuning(n1=1, n2=1, nu=1, lam=0.0))
        np.testing.assert_allclose(rst.r, [2.0, -1.0], atol=1e-15)
        np.testing.assert_allclose(rst.s, [1.0, -1.0], atol=1e-15)
        np.testing.assert_allclose(rst.t, [0.0, 1.0], atol=1e-15)

    def test_dead_beat_reaches_step_in_one_period(self):
        rst = synthesize_rst(INTEGRATOR, GpcTuning(n1=1, n2=1, nu=1, lam=0.0))
        reference = np.ones(10)
        y, _ = simulate_rst_nominal(rst, reference)
        np.testing.assert_allclose(y[1:], 1.0, atol=1e-12)

    @pytest.mark.parametrize("tuning", TUNINGS, ids=lambda t: t.label())
    def test_static_invariants(self, tuning):
        rst = synthesize_rst(LAG, tuning)
        s1, gap = rst.static_checks()
        assert abs(s1) < 1e-9
        assert abs(gap) < 1e-9
        assert rst.horizon == tuning.n2
        assert rst.condition_number is not None

    @pytest.mark.parametrize("tuning", TUNINGS, ids=lambda t: t.label())
    def test_matches_online_receding_horizon(self, tuning):
        rst = synthesize_rst(LAG, tuning)
        reference = _test_reference()
        y_off, u_off = simulate_rst_nominal(rst, reference)
        y_on, u_on = simulate_online_nominal(LAG, tuning, reference)
        np.testing.assert_allclose(u_off, u_on, rtol=0.0, atol=1e-9)
        np.testing.assert_allclose(y_off, y_on, rtol=0.0, atol=1e-9)

    def test_ill_conditioned_normal_equations(self):
        two_period_dead_time = CarimaModel(a=[1.0, -1.0], b=[0.0, 0.0, 1.0], t_sp=0.006)
        with pytest.raises(SynthesisError) as exc:
            synthesize_rst(two_period_dead_time, GpcTuning(n1=1, n2=1, nu=1, lam=0.0))
        assert exc.value.exit_code == 7


class TestClosedLoopOnNominalModel:
    def test_constant_reference_zero_error(self):
        rst = synthesize_rst(LAG, GpcTuning())
        y, u = simulate_rst_nominal(rst, np.full(300, 0.02))
        assert y[-1] == pytest.approx(0.02, abs=1e-10)
        assert abs(u[-1]) < 1e-10

    def test_reference_shift_shifts_settled_output(self):
        rst = synthesize_rst(LAG, GpcTuning(n1=1, n2=15, nu=1, lam=0.05))
        base = np.concatenate([np.linspace(0.0, 0.05, 100), np.full(200, 0.05)])
        y0, _ = simulate_rst_nominal(rst, base)
        y1, _ = simulate_rst_nominal(rst, base + 0.001)
        assert y1[-1] - y0[-1] == pytest.approx(0.001, abs=1e-10)

    def test_large_lambda_freezes_output(self):
        rst = synthesize_rst(LAG, GpcTuning(n1=1, n2=10, nu=10, lam=1e12))
        y, u = simulate_rst_nominal(rst, np.ones(50))
        assert np.max(np.abs(u)) < 1e-6
        assert np.max(np.abs(y)) < 1e-5

    def test_feedthrough_model_rejected(self):
        feedthrough = CarimaModel(a=[1.0, -1.0], b=[0.3, 0.7], t_sp=0.006)
        rst = synthesize_rst(feedthrough, GpcTuning(n1=1, n2=10, nu=10, lam=1.0))
        with pytest.raises(ValueError, match="strictly proper"):
            simulate_rst_nominal(rst, np.ones(20))

    def test_cost_decreases_with_lambda(self):
        reference = np.concatenate([np.zeros(5), np.ones(95)])
        costs = [nominal_cost(synthesize_rst(LAG, GpcTuning(n1=1, n2=10, nu=10, lam=lam)), reference) for lam in (100.0, 10.0, 1.0, 0.1)]
        assert all(a > b for a, b in zip(costs, costs[1:]))


class TestRstTick:
    def test_short_reference_window(self):
        rst = synthesize_rst(LAG, GpcTuning(n1=1, n2=10, nu=2, lam=1.0))
        with pytest.raises(ReferenceWindowError) as exc:
            rst_tick(rst, np.zeros(9), 0.0, RstHistory(rst))
        assert exc.value.required == 10
        assert exc.value.available == 9

    def test_controller_returns_velocity(self):
        rst = synthesize_rst(INTEGRATOR, GpcTuning(n1=1, n2=1, nu=1, lam=0.0))
        ctrl = RstController(rst, y0=0.0)
        # dead-beat: move 3 mm in one 6 ms period
        assert ctrl.tick(np.array([0.003]), 0.0) == pytest.approx(0.5)

    def test_converged_loop_commands_zero(self):
        rst = synthesize_rst(LAG, GpcTuning())
        ctrl = RstController(rst, y0=0.1)
        v = ctrl.tick(np.full(rst.horizon, 0.1), 0.1)
        assert v == pytest.approx(0.0, abs=1e-9)


class TestStabilityMargins:
    def test_default_tuning_is_stable_with_margin(self):
        margins = stability_margins(synthesize_rst(LAG, GpcTuning()))
        assert margins.gain_margin_db > 0.0
        assert margins.phase_margin_deg > 0.0
