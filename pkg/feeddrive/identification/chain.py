"""The identification procedure run end to end on one axis."""

import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from feeddrive.core.errors import IdentificationError
from feeddrive.core.parameters import AxisParameters
from feeddrive.core.trace import Trace
from feeddrive.engine.scenario import SimulationOptions
from feeddrive.identification.delays import calibrate_delays
from feeddrive.identification.feedforward import fit_feedforward
from feeddrive.identification.friction import extract_friction_points, fit_friction
from feeddrive.identification.inertia import estimate_inertia, estimate_static_load
from feeddrive.identification.report import IdentReport
from feeddrive.io.traces import read_trace


logger = logging.getLogger(__name__)

STAGE_ORDER = ("friction", "static", "inertia", "ffw", "delays")


class IdentificationInputs(BaseModel):
    """Recorded traces per stage; a stage without traces is skipped."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sweep: list[Trace] = Field(default_factory=list, description="Constant-velocity runs at several feeds")
    rest: list[Trace] = Field(default_factory=list, description="Runs at rest, one per position")
    inertia: Trace | None = Field(default=None, description="Run with accelerating intervals")
    feedforward: Trace | None = Field(default=None, description="Run with both feedforwards on")
    delays: list[Trace] = Field(default_factory=list, description="Runs without, with velocity, with both feedforwards")


class IdentificationManifest(BaseModel):
    """File form of IdentificationInputs; trace paths relative to the manifest."""

    model_config = ConfigDict(frozen=True)

    format_version: int = 1
    axis: str
    profile: str = "mikron_ucp710"
    sweep: list[str] = Field(default_factory=list)
    rest: list[str] = Field(default_factory=list)
    inertia: str | None = None
    feedforward: str | None = None
    delays: list[str] = Field(default_factory=list)

    def load(self, base_dir: str | Path = ".") -> IdentificationInputs:
        base = Path(base_dir)

        def read(name: str) -> Trace:
            path = Path(name)
            return read_trace(path if path.is_absolute() else base / path)

        return IdentificationInputs(
            sweep=[read(n) for n in self.sweep],
            rest=[read(n) for n in self.rest],
            inertia=read(self.inertia) if self.inertia else None,
            feedforward=read(self.feedforward) if self.feedforward else None,
            delays=[read(n) for n in self.delays],
        )


def identify_axis(
    p: AxisParameters,
    inputs: IdentificationInputs,
    stages: tuple[str, ...] = STAGE_ORDER,
    options: SimulationOptions | None = None,
) -> tuple[AxisParameters, dict[str, IdentReport]]:
    """Run the requested stages in order, each one seeing the parameters found before it.

    The static load is evaluated ahead of the friction plateaus when rest
    traces are given, since the plateau currents carry that load.
    """
    unknown = [s for s in stages if s not in STAGE_ORDER]
    if unknown:
        raise IdentificationError(f"unknown identification stage(s): {', '.join(unknown)}")
    reports: dict[str, IdentReport] = {}

    if "static" in stages and inputs.rest:
        load, reports["static"] = estimate_static_load(inputs.rest, p)
        if isinstance(load, float):
            p = p.model_copy(update={"static_load": load, "static_load_law": None})
        else:
            p = p.model_copy(update={"static_load": 0.0, "static_load_law": load})

    if "friction" in stages and inputs.sweep:
        points, reports["friction_points"] = extract_friction_points(inputs.sweep, p)
        friction, reports["friction"] = fit_friction(points)
        p = p.model_copy(update={"friction": friction})

    if "inertia" in stages and inputs.inertia is not None:
        j_eq, reports["inertia"] = estimate_inertia(inputs.inertia, p)
        p = p.model_copy(update={"j_eq": j_eq})

    if "ffw" in stages and inputs.feedforward is not None:
        tr = inputs.feedforward
        vffw, tffw, reports["ffw"] = fit_feedforward(tr, tr, tr, p.transmission_si)
        p = p.model_copy(update={"vffw": vffw, "tffw": tffw})

    if "delays" in stages and inputs.delays:
        alpha, beta, gamma, reports["delays"] = calibrate_delays(inputs.delays, p, options)
        p = p.model_copy(update={"alpha": alpha, "beta": beta, "gamma": gamma})

    if not reports:
        raise IdentificationError(f"no traces given for stage(s): {', '.join(stages)}")
    for stage, report in reports.items():
        logger.info("identification stage %s: %s", stage, report.parameters)
    return p, reports


def with_current_noise(inputs: IdentificationInputs, sigma: float, seed: int | None = None) -> IdentificationInputs:
    """Copy of the inputs with Gaussian noise of std sigma (A) on every motor current channel."""
    rng = np.random.default_rng(seed)

    def noisy(tr: Trace) -> Trace:
        if "smc" not in tr:
            return tr
        return tr.with_channels({"smc": tr["smc"] + rng.normal(0.0, sigma, len(tr))})

    return IdentificationInputs(
        sweep=[noisy(t) for t in inputs.sweep],
        rest=[noisy(t) for t in inputs.rest],
        inertia=noisy(inputs.inertia) if inputs.inertia is not None else None,
        feedforward=inputs.feedforward,
        delays=inputs.delays,
    )
