"""Path descriptions.

Geometry is given in display units of the axes (mm or deg), feeds in m/min or
rpm. Accelerations and jerks are SI path quantities (m/s^2, rad/s^2, ...).
"""

import math
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class FeedProfile(BaseModel):
    """Limits of the stand-in interpolator; inf disables a limit."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    max_feed: float = Field(description="Feed cap, m/min or rpm")
    max_acceleration: float = math.inf
    max_jerk: float = math.inf

    @model_validator(mode="after")
    def _check(self) -> "FeedProfile":
        for name in ("max_feed", "max_acceleration", "max_jerk"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        return self


class _Path(BaseModel):
    model_config = ConfigDict(frozen=True)

    @property
    def axis_names(self) -> list[str]:
        raise NotImplementedError


class SegmentPath(_Path):
    kind: Literal["segment"] = "segment"
    axes: list[str]
    start: list[float]
    end: list[float]
    feed: float

    @model_validator(mode="after")
    def _check(self) -> "SegmentPath":
        if not (len(self.axes) == len(self.start) == len(self.end)) or not self.axes:
            raise ValueError("axes, start and end must have the same non-zero length")
        if not self.feed > 0.0:
            raise ValueError("feed must be positive")
        return self

    @property
    def axis_names(self) -> list[str]:
        return list(self.axes)


class TwoSpeedSegmentPath(_Path):
    """start -> mid at v1, then mid -> end at v2 along one axis."""

    kind: Literal["two_speed_segment"] = "two_speed_segment"
    axis: str
    start: float
    mid: float
    end: float
    v1: float
    v2: float

    @model_validator(mode="after")
    def _check(self) -> "TwoSpeedSegmentPath":
        if not (self.v1 > 0.0 and self.v2 > 0.0):
            raise ValueError("feeds must be positive")
        if not self.v1 > self.v2:
            raise ValueError("two-speed segment requires v1 > v2")
        return self

    @property
    def axis_names(self) -> list[str]:
        return [self.axis]


class BackAndForthPath(_Path):
    """start -> end -> start, repeated `cycles` times."""

    kind: Literal["back_and_forth"] = "back_and_forth"
    axis: str
    start: float
    end: float
    feed: float
    cycles: int = 1

    @model_validator(mode="after")
    def _check(self) -> "BackAndForthPath":
        if not self.feed > 0.0:
            raise ValueError("feed must be positive")
        if self.cycles < 1:
            raise ValueError("cycles must be at least 1")
        return self

    @property
    def axis_names(self) -> list[str]:
        return [self.axis]


class CirclePath(_Path):
    """Full circles starting at center + (radius, 0), counter-clockwise."""

    kind: Literal["circle"] = "circle"
    axes: tuple[str, str] = ("X", "Y")
    center: tuple[float, float] = (0.0, 0.0)
    radius: float
    feed: float
    turns: float = 1.0

    @model_validator(mode="after")
    def _check(self) -> "CirclePath":
        if not self.radius > 0.0:
            raise ValueError("radius must be positive")
        if not self.feed > 0.0:
            raise ValueError("feed must be positive")
        if not self.turns > 0.0:
            raise ValueError("turns must be positive")
        return self

    @property
    def axis_names(self) -> list[str]:
        return list(self.axes)


class CornerPath(_Path):
    """Two legs meeting at a vertex with the given interior angle (degrees).

    The first leg runs along the first axis from `origin` to the vertex.
    """

    kind: Literal["corner"] = "corner"
    axes: tuple[str, str] = ("X", "Y")
    origin: tuple[float, float] = (0.0, 0.0)
    angle: float
    leg: float
    feed: float

    @model_validator(mode="after")
    def _check(self) -> "CornerPath":
        if not 0.0 < self.angle < 180.0:
            raise ValueError("corner angle must lie in (0, 180) degrees")
        if not self.leg > 0.0:
            raise ValueError("leg length must be positive")
        if not self.feed > 0.0:
            raise ValueError("feed must be positive")
        return self

    @property
    def axis_names(self) -> list[str]:
        return list(self.axes)

    def vertices(self) -> list[tuple[float, float]]:
        x0, y0 = self.origin
        vx, vy = x0 + self.leg, y0
        phi = math.radians(self.angle)
        return [(x0, y0), (vx, vy), (vx - self.leg * math.cos(phi), vy + self.leg * math.sin(phi))]


class SampledPath(_Path):
    """Externally sampled positions (trace CSV with one column per axis)."""

    kind: Literal["sampled"] = "sampled"
    file: str
    axes: list[str]

    @property
    def axis_names(self) -> list[str]:
        return list(self.axes)


PathSpec = Annotated[
    SegmentPath | TwoSpeedSegmentPath | BackAndForthPath | CirclePath | CornerPath | SampledPath,
    Field(discriminator="kind"),
]
