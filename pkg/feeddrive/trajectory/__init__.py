from pathlib import Path

from feeddrive.core.trace import Trace
from feeddrive.core.units import AxisKind

from .paths import (
    BackAndForthPath,
    CirclePath,
    CornerPath,
    FeedProfile,
    PathSpec,
    SampledPath,
    SegmentPath,
    TwoSpeedSegmentPath,
)
from .planner import MotionPhase, PathPlan, PieceTiming, corner_speed_limit, plan_path
from .sampled import SampledPsec, ingest_sampled


def generate_psec(spec: PathSpec, profile: FeedProfile, tsp: float, kind: AxisKind = AxisKind.LINEAR, base_dir: str | Path | None = None) -> SampledPsec:
    """Per-axis PSEC traces (SI) sampled at tsp; planned paths have no resampling displacement."""
    if isinstance(spec, SampledPath):
        path = Path(spec.file)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return ingest_sampled(path, tsp, spec.axes, kind)
    _, positions = plan_path(spec, profile, tsp, kind).sample()
    traces = {axis: Trace(dt=tsp, channels={"psec": x}, units={"psec": kind.si_position_unit}) for axis, x in positions.items()}
    return SampledPsec(traces=traces, max_displacement=0.0)


def friction_sweep_paths(
    axis: str,
    feeds: list[float],
    plateau: float = 0.3,
    max_acceleration: float = 1.0,
    start: float = 0.0,
    kind: AxisKind = AxisKind.LINEAR,
) -> list[BackAndForthPath]:
    """One back-and-forth move per feed, long enough to hold each feed for `plateau` seconds per direction.

    Feeds in display units, max_acceleration in SI (m/s^2 or rad/s^2).
    """
    paths = []
    for f in feeds:
        v = float(kind.feed_to_si(f))
        travel_si = v * plateau + v * v / max_acceleration
        travel = float(kind.position_from_si(travel_si))
        paths.append(BackAndForthPath(axis=axis, start=start, end=start + travel, feed=f))
    return paths


__all__ = [
    "BackAndForthPath",
    "CirclePath",
    "CornerPath",
    "FeedProfile",
    "MotionPhase",
    "PathPlan",
    "PathSpec",
    "PieceTiming",
    "SampledPath",
    "SampledPsec",
    "SegmentPath",
    "TwoSpeedSegmentPath",
    "corner_speed_limit",
    "friction_sweep_paths",
    "generate_psec",
    "ingest_sampled",
    "plan_path",
]
