from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from feeddrive.cascade.controller import ActuatorLimits, FeedforwardFlags
from feeddrive.core.parameters import DEFAULT_PLANT_STEP
from feeddrive.core.trace import CHANNEL_REGISTRY
from feeddrive.gpc.synthesis import GpcTuning
from feeddrive.trajectory.paths import FeedProfile, PathSpec


SCENARIO_FORMAT_VERSION = 1
DEFAULT_SETTLE_MARGIN = 0.5
DEFAULT_CHANNELS = ["psec", "sp", "sv", "smc", "vffws", "tffws", "torque", "pos_err"]


class SimulationOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    plant_step: float = DEFAULT_PLANT_STEP
    settle_margin: float = DEFAULT_SETTLE_MARGIN
    full_rate: bool = Field(default=False, description="Record every plant step instead of every t_sp")
    limits: ActuatorLimits = ActuatorLimits()
    channels: list[str] = Field(default_factory=lambda: list(DEFAULT_CHANNELS))
    friction: bool = True
    load: bool = True

    @model_validator(mode="after")
    def _check(self) -> "SimulationOptions":
        if not self.plant_step > 0.0:
            raise ValueError("plant step must be positive")
        if self.settle_margin < 0.0:
            raise ValueError("settle margin must be non-negative")
        unknown = [c for c in self.channels if c not in CHANNEL_REGISTRY]
        if unknown:
            raise ValueError(f"unknown channel(s): {', '.join(unknown)}")
        return self


class CascadeSelection(BaseModel):
    """Industrial P/PI/PI cascade with optional feedforwards."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["cascade"] = "cascade"
    feedforward: FeedforwardFlags = FeedforwardFlags()


class RstSelection(BaseModel):
    """GPC position loop, synthesized from a tuning or loaded from an RST export."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["rst"] = "rst"
    tuning: GpcTuning = GpcTuning()
    export: str | None = Field(default=None, description="RST export file; overrides the tuning")


ControllerSelection = Annotated[CascadeSelection | RstSelection, Field(discriminator="kind")]


class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = SCENARIO_FORMAT_VERSION
    name: str
    description: str = ""
    profile: str = "mikron_ucp710"
    path: PathSpec
    feed_profile: FeedProfile
    controller: ControllerSelection = CascadeSelection()
    axis_controllers: dict[str, ControllerSelection] = Field(default_factory=dict)
    duration: float | None = Field(default=None, description="Simulated time; defaults to the path plus the settle margin")
    options: SimulationOptions = SimulationOptions()
    source_dir: str | None = Field(default=None, exclude=True)

    @model_validator(mode="after")
    def _check(self) -> "Scenario":
        stray = [a for a in self.axis_controllers if a not in self.path.axis_names]
        if stray:
            raise ValueError(f"controller overrides for axes not on the path: {', '.join(stray)}")
        return self

    def controller_for(self, axis: str) -> CascadeSelection | RstSelection:
        return self.axis_controllers.get(axis, self.controller)

    def with_controller(self, controller: CascadeSelection | RstSelection) -> "Scenario":
        return self.model_copy(update={"controller": controller, "axis_controllers": {}})
