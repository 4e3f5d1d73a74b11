import numpy as np
import pytest

from feeddrive.cascade.controller import FeedforwardFlags
from feeddrive.core.errors import IdentificationError
from feeddrive.core.parameters import DEFAULT_PLANT_STEP
from feeddrive.core.trace import Trace
from feeddrive.engine import AxisSimulator, SimulationOptions, feedforward_setpoints
from feeddrive.identification import IdentificationInputs, IdentificationManifest, identify_axis, with_current_noise
from feeddrive.identification.delays import STAGES
from feeddrive.io.scenarios import load_scenario
from feeddrive.io.traces import write_trace
from feeddrive.trajectory import FeedProfile, SegmentPath, generate_psec, plan_path


LOAD_CURRENT = 0.5


def _sweep(p) -> Trace:
    feeds = [0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 16.0, 20.0, -4.0]
    sv = np.concatenate([np.full(15, f / 60.0) for f in feeds])
    smc = np.concatenate([np.full(15, p.friction.current(f) + LOAD_CURRENT) for f in feeds])
    return Trace(dt=p.t_sp, channels={"sv": sv, "smc": smc})


def _rest(p) -> Trace:
    return Trace(dt=p.t_sp, channels={"sv": np.zeros(30), "smc": np.full(30, LOAD_CURRENT)})


def _feedforward(p) -> Trace:
    psec = 0.01 * np.sin(np.linspace(0.0, 6.0, 150))
    vff, tff = feedforward_setpoints(p, psec, FeedforwardFlags())
    return Trace(dt=p.t_sp, channels={"psec": psec, "vffws": vff, "tffws": tff})


class TestIdentifyAxis:
    def test_static_friction_and_feedforward(self, x_axis):
        inputs = IdentificationInputs(sweep=[_sweep(x_axis)], rest=[_rest(x_axis)], feedforward=_feedforward(x_axis))
        start = x_axis.model_copy(update={"vffw": 0.0, "tffw": 0.0})
        found, reports = identify_axis(start, inputs)
        assert set(reports) == {"static", "friction_points", "friction", "ffw"}
        assert found.static_load == pytest.approx(LOAD_CURRENT * x_axis.k_t)
        assert found.friction.current(10.0) == pytest.approx(x_axis.friction.current(10.0), rel=5e-3)
        assert found.vffw == pytest.approx(1.0)
        assert found.tffw == pytest.approx(x_axis.tffw)

    def test_selected_stages_only(self, x_axis):
        inputs = IdentificationInputs(sweep=[_sweep(x_axis)], rest=[_rest(x_axis)])
        found, reports = identify_axis(x_axis, inputs, stages=("static",))
        assert set(reports) == {"static"}
        assert found.friction == x_axis.friction

    def test_unknown_stage(self, x_axis):
        with pytest.raises(IdentificationError, match="unknown identification stage"):
            identify_axis(x_axis, IdentificationInputs(), stages=("viscous",))

    def test_nothing_to_do(self, x_axis):
        with pytest.raises(IdentificationError, match="no traces given"):
            identify_axis(x_axis, IdentificationInputs())


class TestManifest:
    def test_paths_relative_to_manifest(self, tmp_path, x_axis):
        write_trace(_sweep(x_axis), tmp_path / "sweep.csv")
        write_trace(_rest(x_axis), tmp_path / "rest.csv")
        manifest = IdentificationManifest.model_validate_json('{"axis": "X", "sweep": ["sweep.csv"], "rest": ["rest.csv"]}')
        inputs = manifest.load(tmp_path)
        assert len(inputs.sweep) == 1
        assert inputs.inertia is None
        np.testing.assert_allclose(inputs.rest[0]["smc"], LOAD_CURRENT)


class TestCurrentNoise:
    def test_seeded_noise(self, x_axis):
        inputs = IdentificationInputs(rest=[_rest(x_axis)])
        a = with_current_noise(inputs, 0.01, seed=3)
        b = with_current_noise(inputs, 0.01, seed=3)
        assert a.rest[0].equals(b.rest[0])
        assert not a.rest[0].equals(inputs.rest[0])
        assert np.std(a.rest[0]["smc"]) == pytest.approx(0.01, rel=0.5)


class TestSimulatedRoundTrip:
    @pytest.mark.slow
    def test_inertia_feedforward_and_delays(self, x_axis):
        truth = x_axis.model_copy(update={"j_eq": 0.03})
        case1 = load_scenario("case1_x")
        psec = generate_psec(case1.path, case1.feed_profile, truth.t_sp).traces["X"]["psec"]
        inertia = AxisSimulator(truth, SimulationOptions(full_rate=True, channels=["sp", "sv", "smc"])).run(psec, n_settle=10).trace

        short = plan_path(SegmentPath(axes=["X"], start=[0.0], end=[2.0], feed=2.0), FeedProfile(max_feed=20.0, max_acceleration=2.0), truth.t_sp)
        _, positions = short.sample()
        options = SimulationOptions(channels=["psec", "sp", "vffws", "tffws"])
        delays = [AxisSimulator(truth, options, feedforward=flags).run(positions["X"], n_settle=8).trace for _, flags in STAGES]

        start = x_axis.model_copy(update={"j_eq": 0.02, "vffw": 0.0, "tffw": 0.0, "alpha": 0.0, "beta": 0.0, "gamma": 0.0})
        inputs = IdentificationInputs(inertia=inertia, feedforward=delays[2], delays=delays)
        found, reports = identify_axis(start, inputs, stages=("inertia", "ffw", "delays"))
        assert set(reports) == {"inertia", "ffw", "delays"}
        assert found.j_eq == pytest.approx(0.03, rel=0.02)
        assert found.vffw == pytest.approx(1.0)
        assert found.tffw == pytest.approx(truth.tffw)
        for name in ("alpha", "beta", "gamma"):
            assert getattr(found, name) == pytest.approx(getattr(truth, name), abs=DEFAULT_PLANT_STEP)
