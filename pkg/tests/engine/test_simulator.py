from collections import Counter

import numpy as np
import pytest

from feeddrive.cascade.controller import CascadeController, FeedforwardFlags
from feeddrive.engine import AxisSimulator, SimulationOptions, feedforward_setpoints
from feeddrive.engine import simulator
from feeddrive.trajectory import FeedProfile, SegmentPath, plan_path


class TestFeedforwardSetpoints:
    def test_ramp(self, x_axis):
        psec = 1e-4 * np.arange(10) ** 2
        vff, tff = feedforward_setpoints(x_axis, psec, FeedforwardFlags())
        assert vff[5] == pytest.approx((psec[5] - psec[4]) / x_axis.t_sp)
        assert tff[5] == pytest.approx(x_axis.tffw * 2e-4 / x_axis.t_sp**2 / x_axis.transmission_si)

    def test_disabled(self, x_axis):
        vff, tff = feedforward_setpoints(x_axis, np.arange(5.0), FeedforwardFlags(velocity=False, torque=False))
        assert not vff.any() and not tff.any()


class TestAxisSimulator:
    def test_at_rest(self, x_axis):
        run = AxisSimulator(x_axis).run(np.zeros(5))
        assert len(run.trace) == 5
        assert not run.trace["sp"].any()
        assert run.warnings == []

    def test_full_rate_recording(self, x_no_delays):
        psec = np.linspace(0.0, 1e-4, 4)
        options = SimulationOptions(full_rate=True, channels=["psec", "sp"])
        run = AxisSimulator(x_no_delays, options).run(psec)
        assert run.trace.dt == options.plant_step
        assert len(run.trace) == 3 * 240 + 1
        np.testing.assert_allclose(run.trace["psec"][::240], psec)

    def test_settle_extension(self, x_axis):
        run = AxisSimulator(x_axis, SimulationOptions(channels=["psec"])).run(np.array([0.0, 1e-5]), n_settle=4)
        np.testing.assert_array_equal(run.trace["psec"], [0.0, 1e-5, 1e-5, 1e-5, 1e-5, 1e-5])

    def test_units(self, x_axis):
        run = AxisSimulator(x_axis, SimulationOptions(channels=["sp", "sv", "smc", "torque"])).run(np.zeros(2))
        assert run.trace.units == {"sp": "m", "sv": "m/s", "smc": "A", "torque": "N.m"}


class _CountingController(CascadeController):
    created: list["_CountingController"] = []

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.calls: list[str] = []
        _CountingController.created.append(self)

    def position_tick(self, measured_pos):
        self.calls.append("position")
        return super().position_tick(measured_pos)

    def velocity_tick(self, v_setpoint, measured_omega, tffw_term):
        self.calls.append("velocity")
        return super().velocity_tick(v_setpoint, measured_omega, tffw_term)

    def current_tick(self, i_setpoint, measured_i):
        self.calls.append("current")
        return super().current_tick(i_setpoint, measured_i)


class TestSchedule:
    @pytest.fixture
    def counting(self, monkeypatch):
        _CountingController.created = []
        monkeypatch.setattr(simulator, "CascadeController", _CountingController)
        return _CountingController.created

    def test_loop_rates(self, counting, x_axis):
        n = 5
        AxisSimulator(x_axis).run(np.linspace(0.0, 1e-4, n))
        counts = Counter(counting[0].calls)
        assert counts["position"] == n
        assert counts["velocity"] == (n - 1) * 24 + 1
        assert counts["current"] == (n - 1) * 48 + 1

    def test_outer_loop_first(self, counting, x_axis):
        AxisSimulator(x_axis).run(np.zeros(2))
        assert counting[0].calls[:4] == ["position", "velocity", "current", "current"]


class TestDelayEquivalence:
    def test_delayed_psec_equals_shifted_psec(self, x_no_delays):
        # 12 ms is two position periods
        options = SimulationOptions(friction=False, channels=["sp", "pos_err"])
        no_ffw = FeedforwardFlags(velocity=False, torque=False)
        psec = 1e-3 * (1.0 - np.cos(np.linspace(0.0, np.pi, 40)))
        delayed = AxisSimulator(x_no_delays.model_copy(update={"alpha": 0.012}), options, no_ffw).run(psec, n_settle=2)
        shifted = AxisSimulator(x_no_delays, options, no_ffw).run(np.concatenate([[psec[0], psec[0]], psec]))
        np.testing.assert_allclose(delayed.trace["sp"], shifted.trace["sp"], rtol=0.0, atol=1e-12)
        np.testing.assert_allclose(delayed.trace["pos_err"], shifted.trace["pos_err"], rtol=0.0, atol=1e-12)


class TestStepHalving:
    def test_closed_loop_converges(self, x_axis):
        plan = plan_path(SegmentPath(axes=["X"], start=[0.0], end=[20.0], feed=2.0), FeedProfile(max_feed=20.0, max_acceleration=0.5, max_jerk=5.0), x_axis.t_sp)
        _, positions = plan.sample()
        psec = positions["X"]
        runs = [AxisSimulator(x_axis, SimulationOptions(plant_step=dt, channels=["sp", "pos_err"])).run(psec, n_settle=20) for dt in (25e-6, 12.5e-6)]
        assert len(runs[0].trace) == len(runs[1].trace)
        assert np.max(np.abs(runs[0].trace["sp"] - runs[1].trace["sp"])) < 1e-7
        assert np.max(np.abs(runs[0].trace["pos_err"] - runs[1].trace["pos_err"])) < 1e-7
