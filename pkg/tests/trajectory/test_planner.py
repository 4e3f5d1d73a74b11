import logging
import math

import numpy as np
import pytest

from feeddrive.core.errors import InfeasibleProfileError
from feeddrive.core.units import AxisKind
from feeddrive.trajectory import (
    BackAndForthPath,
    CirclePath,
    CornerPath,
    FeedProfile,
    SegmentPath,
    TwoSpeedSegmentPath,
    corner_speed_limit,
    friction_sweep_paths,
    generate_psec,
    plan_path,
)


T_SP = 0.006


def _feed_steps(x: np.ndarray) -> np.ndarray:
    return np.diff(x) / T_SP


class TestSegment:
    @pytest.fixture
    def samples(self):
        spec = SegmentPath(axes=["X"], start=[0.0], end=[300.0], feed=10.0)
        return plan_path(spec, FeedProfile(max_feed=20.0), T_SP)

    def test_duration(self, samples):
        assert samples.duration == pytest.approx(1.8, rel=1e-12)

    def test_constant_slope(self, samples):
        times, psec = samples.sample()
        assert len(times) == 301
        np.testing.assert_allclose(_feed_steps(psec["X"]), 10.0 / 60.0, rtol=1e-9)
        assert psec["X"][0] == 0.0
        assert psec["X"][-1] == pytest.approx(0.3, rel=1e-12)

    def test_zero_length_path_holds_start(self):
        spec = SegmentPath(axes=["X", "Y"], start=[5.0, 5.0], end=[5.0, 5.0], feed=10.0)
        plan = plan_path(spec, FeedProfile(max_feed=20.0), T_SP)
        times, psec = plan.sample()
        assert plan.duration == 0.0
        assert list(times) == [0.0]
        assert psec["X"][0] == pytest.approx(0.005)

    def test_feed_above_cap_is_clipped(self, caplog):
        spec = SegmentPath(axes=["X"], start=[0.0], end=[100.0], feed=30.0)
        with caplog.at_level(logging.WARNING, logger="feeddrive.trajectory.planner"):
            plan = plan_path(spec, FeedProfile(max_feed=20.0), T_SP)
        assert "exceeds the profile cap" in caplog.text
        _, psec = plan.sample()
        assert _feed_steps(psec["X"]).max() == pytest.approx(20.0 / 60.0, rel=1e-9)

    def test_unreachable_feed(self):
        spec = SegmentPath(axes=["X"], start=[0.0], end=[1.0], feed=10.0)
        with pytest.raises(InfeasibleProfileError) as e:
            plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=0.1), T_SP)
        assert 0.0 < e.value.achievable_feed < 10.0


class TestTwoSpeed:
    @pytest.fixture
    def psec(self):
        spec = TwoSpeedSegmentPath(axis="C", start=0.0, mid=130.0, end=210.0, v1=18.0, v2=6.0)
        _, psec = plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=20.0), T_SP, AxisKind.ROTARY).sample()
        return np.degrees(psec["C"])

    def test_cruise_rates(self, psec):
        rpm = _feed_steps(psec) / 360.0 * 60.0
        first = (psec[:-1] > 40.0) & (psec[1:] < 100.0)
        second = (psec[:-1] > 140.0) & (psec[1:] < 200.0)
        np.testing.assert_allclose(rpm[first], 18.0, rtol=1e-9)
        np.testing.assert_allclose(rpm[second], 6.0, rtol=1e-9)

    def test_rate_changes_at_mid(self, psec):
        step = 6.0 * 6.0 * T_SP  # deg per period at 6 rpm
        slow = (np.diff(psec) <= step * (1.0 + 1e-9)) & (psec[:-1] > 60.0)
        k = int(np.argmax(slow))
        assert 130.0 - 1e-9 <= psec[k] <= 130.0 + step

    def test_reaches_end(self, psec):
        assert psec[-1] == pytest.approx(210.0, rel=1e-12)


class TestCircle:
    @pytest.fixture
    def plan(self):
        spec = CirclePath(radius=150.0, feed=15.0)
        return plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=2.0), T_SP)

    def test_stays_on_radius(self, plan):
        _, psec = plan.sample()
        r = np.hypot(psec["X"], psec["Y"])
        np.testing.assert_allclose(r, 0.15, rtol=1e-9)

    def test_angular_rate(self, plan):
        _, psec = plan.sample()
        theta = np.unwrap(np.arctan2(psec["Y"], psec["X"]))
        rate = np.diff(theta) / T_SP
        mid = len(rate) // 2
        assert rate[mid] == pytest.approx(0.25 / 0.15, rel=1e-6)

    def test_continuity(self, plan):
        _, psec = plan.sample()
        bound = 15.0 / 60.0 * T_SP * (1.0 + 1e-9)
        for x in psec.values():
            assert np.abs(np.diff(x)).max() <= bound

    def test_phases(self, plan):
        kinds = [p.kind for p in plan.phases()]
        assert kinds == ["accel", "cruise", "decel"]
        accel = plan.phases()[0]
        assert accel.end - accel.start == pytest.approx(0.125)

    def test_closes(self, plan):
        _, psec = plan.sample()
        assert psec["X"][-1] == pytest.approx(0.15, abs=1e-12)
        assert psec["Y"][-1] == pytest.approx(0.0, abs=1e-12)


class TestBackAndForth:
    def test_symmetric_about_turnaround(self):
        spec = BackAndForthPath(axis="X", start=0.0, end=100.0, feed=5.0)
        plan = plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=2.0), T_SP)
        t = np.linspace(0.0, plan.duration, 97)
        np.testing.assert_allclose(plan.position_at(t)[0], plan.position_at(plan.duration - t)[0], atol=1e-9)
        assert plan.position_at(plan.duration / 2.0)[0, 0] == pytest.approx(0.1, abs=1e-9)

    def test_cycles_repeat(self):
        spec = BackAndForthPath(axis="X", start=0.0, end=20.0, feed=5.0, cycles=2)
        plan = plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=2.0), T_SP)
        assert len(plan.timings) == 4


class TestCorner:
    def test_speed_limit(self):
        d_in, d_out = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        assert corner_speed_limit(d_in, d_out, 2.0, T_SP) == pytest.approx(2.0 * T_SP / (2.0 * math.sin(math.pi / 4.0)))
        assert corner_speed_limit(d_in, d_in, 2.0, T_SP) == math.inf
        assert corner_speed_limit(d_in, d_out, math.inf, T_SP) == math.inf

    def test_vertices(self):
        spec = CornerPath(angle=90.0, leg=20.0, feed=10.0)
        (o, v, w) = spec.vertices()
        assert o == (0.0, 0.0)
        assert v == (20.0, 0.0)
        assert w[0] == pytest.approx(20.0, abs=1e-12)
        assert w[1] == pytest.approx(20.0)

    def test_junction_slows_down(self):
        spec = CornerPath(angle=90.0, leg=20.0, feed=10.0)
        plan = plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=2.0), T_SP)
        limit = corner_speed_limit(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 2.0, T_SP)
        assert plan.timings[0].v_out == pytest.approx(limit)
        assert plan.timings[1].v_in == pytest.approx(limit)

    @pytest.mark.parametrize("angle", [0.0, 180.0])
    def test_rejects_degenerate_angles(self, angle):
        with pytest.raises(ValueError):
            CornerPath(angle=angle, leg=20.0, feed=10.0)


class TestJerkFilter:
    def test_extends_motion_by_filter_tail(self):
        spec = SegmentPath(axes=["X"], start=[0.0], end=[50.0], feed=5.0)
        sharp = plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=2.0), T_SP)
        smooth = plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=2.0, max_jerk=50.0), T_SP)
        # 2 / 50 / 0.006 rounds to 7 samples
        assert smooth.filter_len == 7
        assert smooth.duration == pytest.approx(sharp.duration + 6 * T_SP)
        _, a = sharp.sample()
        _, b = smooth.sample()
        assert b["X"][-1] == pytest.approx(a["X"][-1])
        assert np.abs(np.diff(b["X"], 2)).max() < np.abs(np.diff(a["X"], 2)).max()


class TestGeneratePsec:
    def test_traces_are_si(self):
        spec = SegmentPath(axes=["X", "Y"], start=[0.0, 0.0], end=[60.0, 80.0], feed=6.0)
        out = generate_psec(spec, FeedProfile(max_feed=20.0, max_acceleration=2.0), T_SP)
        traces = out.traces
        assert out.max_displacement == 0.0
        assert set(traces) == {"X", "Y"}
        assert traces["X"].dt == T_SP
        assert traces["X"].units["psec"] == "m"
        assert traces["Y"]["psec"][-1] == pytest.approx(0.08)


class TestFrictionSweepPaths:
    def test_each_feed_holds_a_plateau(self):
        paths = friction_sweep_paths("X", [1.0, 2.0, 4.0], plateau=0.3, max_acceleration=1.0)
        assert [p.feed for p in paths] == [1.0, 2.0, 4.0]
        for spec in paths:
            plan = plan_path(spec, FeedProfile(max_feed=20.0, max_acceleration=1.0), T_SP)
            assert plan.timings[0].t_cruise >= 0.3 - 1e-12
            assert plan.timings[1].t_cruise >= 0.3 - 1e-12

    def test_travel(self):
        (spec,) = friction_sweep_paths("X", [1.0], plateau=0.3, max_acceleration=1.0, start=10.0)
        v = 1.0 / 60.0
        assert spec.start == 10.0
        assert spec.end == pytest.approx(10.0 + (v * 0.3 + v * v) * 1e3)
