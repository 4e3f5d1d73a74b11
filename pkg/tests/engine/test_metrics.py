import numpy as np
import pytest

from feeddrive.core.errors import TraceFormatError
from feeddrive.core.trace import Trace
from feeddrive.engine import contour_error_circle, delay_phases, phase_at, phase_metrics, polyline_deviation, steady_mask, tracking_error, vector_error
from feeddrive.trajectory import MotionPhase


PHASES = [
    MotionPhase(kind="accel", start=0.0, end=1.0),
    MotionPhase(kind="cruise", start=1.0, end=3.0),
    MotionPhase(kind="decel", start=3.0, end=4.0),
]


class TestTrackingError:
    def test_metrics(self):
        psec = Trace(dt=0.5, channels={"psec": np.array([0.0, 1.0, 2.0, 3.0])}, units={"psec": "m"})
        sp = Trace(dt=0.5, channels={"sp": np.array([0.0, 0.5, 2.5, 3.0])})
        err, m = tracking_error(psec, sp)
        np.testing.assert_allclose(err["pos_err"], [0.0, 0.5, -0.5, 0.0])
        assert err.unit("pos_err") == "m"
        assert m.max == 0.5
        assert m.mean == 0.0
        assert m.rms == pytest.approx(np.sqrt(0.125))
        assert m.t_max == 0.5
        assert m.n == 4

    def test_misaligned(self):
        psec = Trace(dt=0.5, channels={"psec": np.zeros(4)})
        sp = Trace(dt=0.25, channels={"sp": np.zeros(4)})
        with pytest.raises(TraceFormatError, match="misaligned"):
            tracking_error(psec, sp)


class TestVectorError:
    def test_norm_across_axes(self):
        np.testing.assert_allclose(vector_error([np.array([3.0, 0.0]), np.array([4.0, -1.0])]), [5.0, 1.0])


class TestDelayPhases:
    def test_shift(self):
        shifted = delay_phases(PHASES, 0.25)
        assert [(p.kind, p.start, p.end) for p in shifted] == [("accel", 0.25, 1.25), ("cruise", 1.25, 3.25), ("decel", 3.25, 4.25)]
        assert PHASES[0].start == 0.0

    def test_phase_at(self):
        assert phase_at(PHASES, 0.5) == "accel"
        assert phase_at(PHASES, 2.0) == "cruise"
        assert phase_at(PHASES, 4.0) == "decel"
        assert phase_at(PHASES, 4.5) is None
        assert phase_at(delay_phases(PHASES, 0.25), 0.1) is None


class TestSteadyMask:
    def test_cruise_after_settling(self):
        times = 0.5 * np.arange(9)
        mask = steady_mask(times, PHASES, 0.5)
        assert list(times[mask]) == [1.5, 2.0, 2.5, 3.0]

    def test_window_longer_than_cruise(self):
        assert not steady_mask(np.linspace(0.0, 4.0, 41), PHASES, 2.5).any()

    def test_phase_split(self):
        times = 0.5 * np.arange(9)
        e = np.where((times >= 1.5) & (times <= 3.0), 0.1, 1.0)
        e[0] = -2.0
        m = phase_metrics(e, times, PHASES, 0.5)
        assert m.steady.max == pytest.approx(0.1)
        assert m.transient.max == 2.0
        assert m.whole.max == 2.0
        assert m.steady.n + m.transient.n == 9


class TestContour:
    def test_circle(self):
        theta = np.linspace(0.0, 2.0 * np.pi, 50)
        x = Trace(dt=0.1, channels={"sp": 1.0 + 0.201 * np.cos(theta)})
        y = Trace(dt=0.1, channels={"sp": 0.201 * np.sin(theta)})
        dev, worst = contour_error_circle(x, y, (1.0, 0.0), 0.2)
        assert worst == pytest.approx(0.001)
        assert len(dev) == 50

    def test_polyline(self):
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
        x = np.array([0.5, 1.02, 1.0, 0.9])
        y = np.array([0.01, 0.5, 0.0, 0.9])
        assert polyline_deviation(x, y, vertices) == pytest.approx(0.1)
        assert polyline_deviation(x, y, vertices, radius=0.6) == pytest.approx(0.02)
