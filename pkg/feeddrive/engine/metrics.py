"""Tracking, contour and corner metrics. All inputs and outputs are SI."""

import numpy as np
from pydantic import BaseModel, ConfigDict

from feeddrive.core.errors import TraceFormatError
from feeddrive.core.trace import Trace
from feeddrive.trajectory.planner import MotionPhase


class TrackingMetrics(BaseModel):
    """max and rms are of |e|; mean is signed. t_max is the time of the max."""

    model_config = ConfigDict(frozen=True)

    max: float = 0.0
    mean: float = 0.0
    rms: float = 0.0
    t_max: float | None = None
    n: int = 0

    @classmethod
    def of(cls, e: np.ndarray, times: np.ndarray | None = None) -> "TrackingMetrics":
        e = np.asarray(e, dtype=float)
        if len(e) == 0:
            return cls()
        k = int(np.argmax(np.abs(e)))
        return cls(
            max=float(np.abs(e[k])),
            mean=float(np.mean(e)),
            rms=float(np.sqrt(np.mean(e**2))),
            t_max=float(times[k]) if times is not None else None,
            n=len(e),
        )


class PhaseMetrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    whole: TrackingMetrics
    steady: TrackingMetrics
    transient: TrackingMetrics


def tracking_error(psec: Trace, sp: Trace, psec_channel: str = "psec", sp_channel: str = "sp") -> tuple[Trace, TrackingMetrics]:
    """Per-sample psec - sp and its metrics."""
    a, b = psec[psec_channel], sp[sp_channel]
    if len(a) != len(b) or psec.dt != sp.dt:
        raise TraceFormatError(f"misaligned traces: {len(a)} samples at {psec.dt} s vs {len(b)} at {sp.dt} s")
    e = a - b
    err = Trace(dt=psec.dt, t0=psec.t0, channels={"pos_err": e}, units={"pos_err": psec.unit(psec_channel)})
    return err, TrackingMetrics.of(e, err.times)


def vector_error(errors: list[np.ndarray]) -> np.ndarray:
    """Euclidean norm across axes of per-axis error samples."""
    return np.sqrt(np.sum(np.vstack(errors) ** 2, axis=0))


def delay_phases(phases: list[MotionPhase], delay: float) -> list[MotionPhase]:
    """Phases as seen by an axis that follows the commanded path delay seconds late."""
    return [ph.model_copy(update={"start": ph.start + delay, "end": ph.end + delay}) for ph in phases]


def phase_at(phases: list[MotionPhase], t: float) -> str | None:
    """Kind of the first phase containing t, or None between phases."""
    for ph in phases:
        if ph.start <= t <= ph.end:
            return ph.kind
    return None


def steady_mask(times: np.ndarray, phases: list[MotionPhase], settle_window: float) -> np.ndarray:
    """Samples inside cruise intervals, excluding the first settle_window of each."""
    mask = np.zeros(len(times), dtype=bool)
    for ph in phases:
        if ph.kind == "cruise":
            mask |= (times >= ph.start + settle_window) & (times <= ph.end)
    return mask


def phase_metrics(e: np.ndarray, times: np.ndarray, phases: list[MotionPhase], settle_window: float) -> PhaseMetrics:
    steady = steady_mask(times, phases, settle_window)
    return PhaseMetrics(
        whole=TrackingMetrics.of(e, times),
        steady=TrackingMetrics.of(e[steady], times[steady]),
        transient=TrackingMetrics.of(e[~steady], times[~steady]),
    )


def contour_error_circle(x: Trace, y: Trace, center: tuple[float, float], radius: float, channel: str = "sp") -> tuple[np.ndarray, float]:
    """Radial deviation |r - R| per sample and its maximum."""
    r = np.hypot(x[channel] - center[0], y[channel] - center[1])
    dev = np.abs(r - radius)
    return dev, float(dev.max()) if len(dev) else 0.0


def polyline_distance(points: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Distance from each point (n, 2) to a polyline given by its vertices (m, 2)."""
    best = np.full(len(points), np.inf)
    for a, b in zip(vertices[:-1], vertices[1:]):
        ab = b - a
        t = np.clip(((points - a) @ ab) / (ab @ ab), 0.0, 1.0)
        d = np.linalg.norm(points - (a + t[:, None] * ab), axis=1)
        best = np.minimum(best, d)
    return best


def polyline_deviation(x: np.ndarray, y: np.ndarray, vertices: np.ndarray, radius: float | None = None) -> float:
    """Max distance from the (x, y) path to the commanded polyline.

    With a radius, only samples within that distance of the corner vertex count.
    """
    points = np.column_stack([x, y])
    d = polyline_distance(points, vertices)
    if radius is not None:
        near = np.linalg.norm(points - vertices[1], axis=1) <= radius
        d = d[near]
    return float(d.max()) if len(d) else 0.0
