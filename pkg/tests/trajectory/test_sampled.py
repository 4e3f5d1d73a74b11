import numpy as np
import pytest

from feeddrive.core.errors import TrajectoryError
from feeddrive.core.units import AxisKind
from feeddrive.io.traces import write_table
from feeddrive.trajectory import FeedProfile, SampledPath, generate_psec, ingest_sampled


T_SP = 0.006


class TestIngestSampled:
    def test_already_at_period(self, tmp_path):
        t = T_SP * np.arange(50)
        x = np.linspace(0.0, 10.0, 50)
        path = write_table(tmp_path / "p.csv", t, {"X": x}, {"X": "mm"})
        out = ingest_sampled(path, T_SP)
        np.testing.assert_allclose(out.traces["X"]["psec"], x * 1e-3, atol=1e-12)
        assert out.max_displacement < 1e-12

    def test_oversampled_ramp(self, tmp_path):
        t = 0.5 * T_SP * np.arange(201)
        x = 20.0 * t
        path = write_table(tmp_path / "ramp.csv", t, {"X": x}, {"X": "mm"})
        out = ingest_sampled(path, T_SP)
        psec = out.traces["X"]["psec"]
        assert len(psec) == 101
        np.testing.assert_allclose(np.diff(psec), 20.0e-3 * T_SP, rtol=1e-9)
        assert out.max_displacement < 1e-12

    def test_circle_keeps_radius(self, tmp_path):
        t = 1e-3 * np.arange(3001)
        theta = 2.0 * np.pi * t / 3.0
        path = write_table(tmp_path / "circle.csv", t, {"X": 150.0 * np.cos(theta), "Y": 150.0 * np.sin(theta)}, {"X": "mm", "Y": "mm"})
        out = ingest_sampled(path, 1e-3, ["X", "Y"])
        r = np.hypot(out.traces["X"]["psec"], out.traces["Y"]["psec"])
        assert np.abs(r - 0.15).max() < 1e-7

    def test_coarse_input_reports_displacement(self, tmp_path):
        t = 0.01 * np.arange(101)
        theta = 2.0 * np.pi * t
        path = write_table(tmp_path / "coarse.csv", t, {"X": 150.0 * np.cos(theta), "Y": 150.0 * np.sin(theta)}, {"X": "mm", "Y": "mm"})
        out = ingest_sampled(path, 0.006, ["X", "Y"])
        assert out.max_displacement > 1e-6

    def test_missing_axis(self, tmp_path):
        path = write_table(tmp_path / "p.csv", T_SP * np.arange(3), {"X": np.zeros(3)}, {"X": "mm"})
        with pytest.raises(TrajectoryError, match="missing axis"):
            ingest_sampled(path, T_SP, ["X", "Y"])

    def test_unit_mismatch(self, tmp_path):
        path = write_table(tmp_path / "p.csv", T_SP * np.arange(3), {"C": np.zeros(3)}, {"C": "mm"})
        with pytest.raises(TrajectoryError, match="expected 'deg'"):
            ingest_sampled(path, T_SP, ["C"], AxisKind.ROTARY)

    def test_generate_psec_resolves_relative_file(self, tmp_path):
        write_table(tmp_path / "p.csv", T_SP * np.arange(5), {"X": np.arange(5.0)}, {"X": "mm"})
        out = generate_psec(SampledPath(file="p.csv", axes=["X"]), FeedProfile(max_feed=20.0), T_SP, base_dir=tmp_path)
        assert out.traces["X"]["psec"][-1] == pytest.approx(4e-3)
        assert out.max_displacement < 1e-12

    def test_start_time_kept(self, tmp_path):
        path = write_table(tmp_path / "late.csv", 0.5 + T_SP * np.arange(5), {"X": np.arange(5.0)}, {"X": "mm"})
        trace = ingest_sampled(path, T_SP).traces["X"]
        assert trace.t0 == pytest.approx(0.5)
        assert trace.times[-1] == pytest.approx(0.5 + 4 * T_SP)
