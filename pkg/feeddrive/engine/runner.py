import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from feeddrive.cascade.controller import FeedforwardFlags
from feeddrive.core.errors import ScenarioError
from feeddrive.core.parameters import AxisParameters, MachineProfile, require_valid
from feeddrive.core.trace import Trace
from feeddrive.core.units import AxisKind
from feeddrive.engine.metrics import PhaseMetrics, contour_error_circle, delay_phases, phase_metrics, polyline_deviation, vector_error
from feeddrive.engine.scenario import CascadeSelection, RstSelection, Scenario
from feeddrive.engine.simulator import AxisRun, AxisSimulator
from feeddrive.gpc.carima import CarimaModel
from feeddrive.gpc.model import model_from_axis
from feeddrive.gpc.synthesis import RstPolynomials, synthesize_rst
from feeddrive.io.profiles import load_profile
from feeddrive.io.rst_export import load_rst
from feeddrive.trajectory import generate_psec, plan_path
from feeddrive.trajectory.paths import CirclePath, CornerPath, SampledPath
from feeddrive.trajectory.planner import MotionPhase


logger = logging.getLogger(__name__)

REQUIRED_CHANNELS = ("psec", "sp", "pos_err")
SETTLE_TIME_CONSTANTS = 5.0
MODEL_CACHE_SIZE = 16

_models: dict[tuple[str, float], CarimaModel] = {}


class RunResult(BaseModel):
    """Per-axis traces and the metrics derived from them."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scenario: str
    axes: dict[str, AxisRun]
    metrics: dict[str, PhaseMetrics]
    vector: PhaseMetrics | None = None
    contour_max: float | None = None
    corner_deviation: float | None = None
    phases: list[MotionPhase] = []
    phase_delays: dict[str, float] = {}
    psec_displacement: float = 0.0
    warnings: list[str] = []

    def trace(self, axis: str) -> Trace:
        return self.axes[axis].trace

    def axis_phases(self, axis: str) -> list[MotionPhase]:
        """Commanded phases shifted by the PSEC delay of one axis."""
        return delay_phases(self.phases, self.phase_delays.get(axis, 0.0))

    @property
    def max_error(self) -> float:
        """Largest tracking error of the run (vector norm for multi-axis paths)."""
        if self.vector is not None:
            return self.vector.whole.max
        return max((m.whole.max for m in self.metrics.values()), default=0.0)

    @property
    def saturated(self) -> bool:
        return any(r.current_saturations or r.voltage_saturations for r in self.axes.values())


def settle_window(p: AxisParameters) -> float:
    """Time after a delayed cruise start before the position loop counts as settled."""
    return SETTLE_TIME_CONSTANTS / p.k_p_si


def cached_model(p: AxisParameters, plant_step: float) -> CarimaModel:
    key = (p.model_dump_json(), plant_step)
    if key not in _models:
        if len(_models) >= MODEL_CACHE_SIZE:
            del _models[next(iter(_models))]
        _models[key] = model_from_axis(p, plant_step)
    return _models[key]


def resolve_rst(selection: RstSelection, p: AxisParameters, plant_step: float, source_dir: str | None = None) -> RstPolynomials:
    if selection.export is not None:
        path = Path(selection.export)
        if source_dir is not None and not path.is_absolute():
            path = Path(source_dir) / path
        rst = load_rst(path)
        if abs(rst.t_sp - p.t_sp) > 1e-12:
            raise ScenarioError(f"RST export {path} is sampled at {rst.t_sp} s but axis {p.name} runs at {p.t_sp} s")
        return rst
    return synthesize_rst(cached_model(p, plant_step), selection.tuning)


def _axis_parameters(s: Scenario, profile: MachineProfile) -> list[AxisParameters]:
    params = [require_valid(profile.axis(a), s.options.plant_step) for a in s.path.axis_names]
    if len({p.kind for p in params}) > 1:
        raise ScenarioError(f"scenario '{s.name}' mixes linear and rotary axes on one path")
    if len({p.t_sp for p in params}) > 1:
        raise ScenarioError(f"scenario '{s.name}' combines axes with different position cycle times")
    return params


def run(s: Scenario, profile: MachineProfile | None = None) -> RunResult:
    if profile is None:
        profile = load_profile(s.profile, base_dir=s.source_dir, plant_step=s.options.plant_step)
    params = _axis_parameters(s, profile)
    kind, t_sp = params[0].kind, params[0].t_sp

    generated = generate_psec(s.path, s.feed_profile, t_sp, kind, base_dir=s.source_dir)
    psec = generated.traces
    phases = [] if isinstance(s.path, SampledPath) else plan_path(s.path, s.feed_profile, t_sp, kind).phases()
    motion = (len(next(iter(psec.values()))) - 1) * t_sp
    tail = s.options.settle_margin
    if s.duration is not None:
        if s.duration < motion + s.options.settle_margin - 1e-9:
            raise ScenarioError(f"scenario '{s.name}': duration {s.duration} s does not cover the path ({motion:.6g} s) plus the settle margin")
        tail = s.duration - motion
    n_settle = int(math.ceil(tail / t_sp - 1e-9))

    channels = list(s.options.channels) + [c for c in REQUIRED_CHANNELS if c not in s.options.channels]
    options = s.options.model_copy(update={"channels": channels})

    axes: dict[str, AxisRun] = {}
    metrics: dict[str, PhaseMetrics] = {}
    for p in params:
        selection = s.controller_for(p.name)
        if isinstance(selection, CascadeSelection):
            sim = AxisSimulator(p, options, feedforward=selection.feedforward)
        else:
            sim = AxisSimulator(p, options, rst=resolve_rst(selection, p, options.plant_step, s.source_dir))
        result = sim.run(psec[p.name]["psec"], n_settle)
        axes[p.name] = result
        tr = result.trace
        metrics[p.name] = phase_metrics(tr["pos_err"], tr.times, delay_phases(phases, p.alpha), settle_window(p))

    vector = None
    if len(params) > 1:
        first = axes[params[0].name].trace
        e = vector_error([axes[p.name].trace["pos_err"] for p in params])
        lag = max(p.alpha for p in params)
        vector = phase_metrics(e, first.times, delay_phases(phases, lag), max(settle_window(p) for p in params))

    contour_max = corner = None
    match s.path:
        case CirclePath():
            center = kind.position_to_si(np.array(s.path.center))
            x, y = (axes[a].trace for a in s.path.axes)
            _, contour_max = contour_error_circle(x, y, (center[0], center[1]), kind.position_to_si(s.path.radius))
        case CornerPath():
            corner = corner_deviation(axes, s.path, kind, radius=kind.position_to_si(s.path.leg) / 2.0)

    warnings = [w for r in axes.values() for w in r.warnings]
    return RunResult(
        scenario=s.name,
        axes=axes,
        metrics=metrics,
        vector=vector,
        contour_max=contour_max,
        corner_deviation=corner,
        phases=phases,
        phase_delays={p.name: p.alpha for p in params},
        psec_displacement=generated.max_displacement,
        warnings=warnings,
    )


def corner_deviation(axes: dict[str, AxisRun] | RunResult, spec: CornerPath, kind: AxisKind = AxisKind.LINEAR, radius: float | None = None) -> float:
    """Max distance from the simulated (x, y) path to the commanded corner polyline (SI)."""
    if isinstance(axes, RunResult):
        axes = axes.axes
    ax, ay = spec.axes
    vertices = kind.position_to_si(np.array(spec.vertices()))
    return polyline_deviation(axes[ax].trace["sp"], axes[ay].trace["sp"], vertices, radius)


class Comparison(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scenario: str
    cascade: RunResult
    rst: RunResult

    @property
    def cascade_max(self) -> float:
        return self.cascade.max_error

    @property
    def rst_max(self) -> float:
        return self.rst.max_error

    @property
    def ratio(self) -> float:
        if self.cascade_max == 0.0:
            return 0.0 if self.rst_max == 0.0 else math.inf
        return self.rst_max / self.cascade_max

    def summary(self) -> dict:
        out = {
            "scenario": self.scenario,
            "cascade_max_error": self.cascade_max,
            "rst_max_error": self.rst_max,
            "ratio": self.ratio,
        }
        if self.cascade.contour_max is not None:
            out["cascade_max_contour_error"] = self.cascade.contour_max
            out["rst_max_contour_error"] = self.rst.contour_max
        if self.cascade.corner_deviation is not None:
            out["cascade_corner_deviation"] = self.cascade.corner_deviation
            out["rst_corner_deviation"] = self.rst.corner_deviation
        return out


def compare(s: Scenario, profile: MachineProfile | None = None) -> Comparison:
    """Run the cascade with feedforwards and the RST controller on identical PSEC."""
    if profile is None:
        profile = load_profile(s.profile, base_dir=s.source_dir, plant_step=s.options.plant_step)
    cascade = s.controller if isinstance(s.controller, CascadeSelection) else CascadeSelection(feedforward=FeedforwardFlags())
    rst = s.controller if isinstance(s.controller, RstSelection) else RstSelection()
    return Comparison(
        scenario=s.name,
        cascade=run(s.with_controller(cascade), profile),
        rst=run(s.with_controller(rst), profile),
    )


def run_batch(scenarios: list[Scenario], workers: int = 1) -> list[RunResult]:
    """Run scenarios independently; results come back in input order."""
    if workers <= 1 or len(scenarios) <= 1:
        return [run(s) for s in scenarios]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, scenarios))
