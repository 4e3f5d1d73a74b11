"""Stand-in interpolator: junction-speed planning and trapezoidal feed ramps.

A path is a chain of pieces (lines and arcs). Junction speeds are limited by
the adjacent feeds and by the per-axis velocity jump a corner causes within
one position period. A forward and a backward pass make every junction speed
reachable, then each piece gets an analytic trapezoid. An optional jerk limit
smooths the arc-length samples with a moving average of length a/j.
"""

import logging
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from feeddrive.core.errors import InfeasibleProfileError, TrajectoryError
from feeddrive.core.units import AxisKind
from feeddrive.trajectory.paths import (
    BackAndForthPath,
    CirclePath,
    CornerPath,
    FeedProfile,
    PathSpec,
    SampledPath,
    SegmentPath,
    TwoSpeedSegmentPath,
)


logger = logging.getLogger(__name__)

FEED_TOLERANCE = 1e-9


class _Piece:
    length: float
    feed: float

    def positions(self, s: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def start_direction(self) -> np.ndarray:
        raise NotImplementedError

    def end_direction(self) -> np.ndarray:
        raise NotImplementedError


class _Line(_Piece):
    def __init__(self, p0: np.ndarray, p1: np.ndarray, feed: float):
        self.p0 = p0
        self.p1 = p1
        self.feed = feed
        self.length = float(np.linalg.norm(p1 - p0))
        self._dir = (p1 - p0) / self.length if self.length > 0.0 else np.zeros_like(p0)

    def positions(self, s: np.ndarray) -> np.ndarray:
        return self.p0[:, None] + self._dir[:, None] * s[None, :]

    def start_direction(self) -> np.ndarray:
        return self._dir

    def end_direction(self) -> np.ndarray:
        return self._dir


class _Arc(_Piece):
    """Counter-clockwise arc in the plane of two axes."""

    def __init__(self, center: np.ndarray, radius: float, theta0: float, sweep: float, feed: float):
        self.center = center
        self.radius = radius
        self.theta0 = theta0
        self.sweep = sweep
        self.feed = feed
        self.length = radius * sweep

    def positions(self, s: np.ndarray) -> np.ndarray:
        theta = self.theta0 + s / self.radius
        return np.vstack([self.center[0] + self.radius * np.cos(theta), self.center[1] + self.radius * np.sin(theta)])

    def _tangent(self, theta: float) -> np.ndarray:
        return np.array([-math.sin(theta), math.cos(theta)])

    def start_direction(self) -> np.ndarray:
        return self._tangent(self.theta0)

    def end_direction(self) -> np.ndarray:
        return self._tangent(self.theta0 + self.sweep)


class PieceTiming(BaseModel):
    model_config = ConfigDict(frozen=True)

    t0: float
    s0: float
    length: float
    v_in: float
    v_peak: float
    v_out: float
    accel: float
    t_acc: float
    t_cruise: float
    t_dec: float

    @property
    def duration(self) -> float:
        return self.t_acc + self.t_cruise + self.t_dec

    @property
    def d_acc(self) -> float:
        return self.v_in * self.t_acc + 0.5 * self.accel * self.t_acc**2 if self.t_acc > 0.0 else 0.0

    @property
    def d_cruise(self) -> float:
        return self.v_peak * self.t_cruise


class MotionPhase(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["accel", "cruise", "decel"]
    start: float
    end: float


def corner_speed_limit(d_in: np.ndarray, d_out: np.ndarray, accel: float, t_sp: float) -> float:
    """Highest path speed whose per-axis velocity jump over one period stays within accel * t_sp."""
    cos_turn = float(np.clip(np.dot(d_in, d_out), -1.0, 1.0))
    turn = math.acos(cos_turn)
    if turn < 1e-9 or math.isinf(accel):
        return math.inf
    return accel * t_sp / (2.0 * math.sin(turn / 2.0))


def _build_pieces(spec: PathSpec, kind: AxisKind) -> tuple[list[_Piece], np.ndarray]:
    pos = kind.position_scale
    feed = kind.feed_scale

    def pt(*values: float) -> np.ndarray:
        return np.array(values, dtype=float) * pos

    match spec:
        case SegmentPath():
            p0, p1 = pt(*spec.start), pt(*spec.end)
            return [_Line(p0, p1, spec.feed * feed)], p0
        case TwoSpeedSegmentPath():
            p0, p1, p2 = pt(spec.start), pt(spec.mid), pt(spec.end)
            return [_Line(p0, p1, spec.v1 * feed), _Line(p1, p2, spec.v2 * feed)], p0
        case BackAndForthPath():
            p0, p1 = pt(spec.start), pt(spec.end)
            pieces: list[_Piece] = []
            for _ in range(spec.cycles):
                pieces += [_Line(p0, p1, spec.feed * feed), _Line(p1, p0, spec.feed * feed)]
            return pieces, p0
        case CirclePath():
            center = pt(*spec.center)
            r = spec.radius * pos
            return [_Arc(center, r, 0.0, 2.0 * math.pi * spec.turns, spec.feed * feed)], center + np.array([r, 0.0])
        case CornerPath():
            o, v, w = (pt(*p) for p in spec.vertices())
            return [_Line(o, v, spec.feed * feed), _Line(v, w, spec.feed * feed)], o
        case SampledPath():
            raise TrajectoryError("sampled paths are ingested, not planned")
    raise TrajectoryError(f"unsupported path kind: {spec!r}")


class PathPlan:
    """Time law of a planned path; positions are SI per axis."""

    def __init__(self, axes: list[str], kind: AxisKind, pieces: list[_Piece], timings: list[PieceTiming], start: np.ndarray, t_sp: float, filter_len: int = 1):
        self.axes = axes
        self.kind = kind
        self.pieces = pieces
        self.timings = timings
        self.start = start
        self.t_sp = t_sp
        self.filter_len = filter_len

    @property
    def length(self) -> float:
        return sum(p.length for p in self.pieces)

    @property
    def duration(self) -> float:
        """Time to the end of motion, including the jerk filter tail."""
        if not self.timings:
            return 0.0
        last = self.timings[-1]
        return last.t0 + last.duration + (self.filter_len - 1) * self.t_sp

    def arc_length_at(self, t) -> np.ndarray:
        """Unfiltered arc length at times t."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        s = np.full_like(t, self.length)
        s[t <= 0.0] = 0.0
        for tm in self.timings:
            tau = t - tm.t0
            m = (tau >= 0.0) & (tau < tm.duration)
            if not m.any():
                continue
            tau = tau[m]
            acc = tau < tm.t_acc
            cru = ~acc & (tau < tm.t_acc + tm.t_cruise)
            dec = ~acc & ~cru
            out = np.empty_like(tau)
            out[acc] = tm.v_in * tau[acc] + 0.5 * tm.accel * tau[acc] ** 2
            out[cru] = tm.d_acc + tm.v_peak * (tau[cru] - tm.t_acc)
            td = tau[dec] - tm.t_acc - tm.t_cruise
            out[dec] = tm.d_acc + tm.d_cruise + tm.v_peak * td - 0.5 * tm.accel * td**2
            s[m] = tm.s0 + np.minimum(out, tm.length)
        return s

    def positions_at_arc_length(self, s: np.ndarray) -> np.ndarray:
        """(n_axes, len(s)) positions."""
        s = np.asarray(s, dtype=float)
        if not self.pieces:
            return np.repeat(self.start[:, None], len(s), axis=1)
        bounds = np.cumsum([0.0] + [p.length for p in self.pieces])
        idx = np.clip(np.searchsorted(bounds, s, side="right") - 1, 0, len(self.pieces) - 1)
        out = np.empty((len(self.axes), len(s)))
        for k, piece in enumerate(self.pieces):
            m = idx == k
            if m.any():
                out[:, m] = piece.positions(np.clip(s[m] - bounds[k], 0.0, piece.length))
        return out

    def position_at(self, t) -> np.ndarray:
        return self.positions_at_arc_length(self.arc_length_at(t))

    def sample(self) -> tuple[np.ndarray, dict[str, np.ndarray]]:
        """Sample at t_sp from t = 0 until the end of motion (held afterwards)."""
        if not self.timings:
            return np.zeros(1), {name: np.array([x]) for name, x in zip(self.axes, self.start)}
        n = int(math.ceil(self.duration / self.t_sp - 1e-9)) + 1
        times = self.t_sp * np.arange(n)
        s = self.arc_length_at(times[: n - (self.filter_len - 1)])
        if self.filter_len > 1:
            padded = np.concatenate([s, np.full(self.filter_len - 1, s[-1])])
            s = np.convolve(padded, np.ones(self.filter_len) / self.filter_len)[: len(padded)]
        xyz = self.positions_at_arc_length(s)
        return times, {name: xyz[k] for k, name in enumerate(self.axes)}

    def phases(self) -> list[MotionPhase]:
        """Accel/cruise/decel intervals of the commanded feed, widened by the jerk filter."""
        widen = (self.filter_len - 1) * self.t_sp
        out: list[MotionPhase] = []
        for tm in self.timings:
            t1 = tm.t0 + tm.t_acc
            t2 = t1 + tm.t_cruise
            t3 = t2 + tm.t_dec
            if tm.t_acc > 0.0:
                out.append(MotionPhase(kind="accel", start=tm.t0, end=t1 + widen))
            if tm.t_cruise > 0.0 and t2 > t1 + widen:
                out.append(MotionPhase(kind="cruise", start=t1 + widen, end=t2))
            if tm.t_dec > 0.0:
                out.append(MotionPhase(kind="decel", start=t2, end=t3 + widen))
        return out


def _plan_timings(pieces: list[_Piece], accel: float, t_sp: float, kind: AxisKind) -> list[PieceTiming]:
    n = len(pieces)
    v = [0.0] * (n + 1)
    for i in range(1, n):
        v[i] = min(
            pieces[i - 1].feed,
            pieces[i].feed,
            corner_speed_limit(pieces[i - 1].end_direction(), pieces[i].start_direction(), accel, t_sp),
        )
    if math.isfinite(accel):
        for i in range(n):
            v[i + 1] = min(v[i + 1], math.sqrt(v[i] ** 2 + 2.0 * accel * pieces[i].length))
        for i in reversed(range(n)):
            v[i] = min(v[i], math.sqrt(v[i + 1] ** 2 + 2.0 * accel * pieces[i].length))

    timings: list[PieceTiming] = []
    t0 = s0 = 0.0
    for i, piece in enumerate(pieces):
        v_in, v_out = v[i], v[i + 1]
        if math.isinf(accel):
            v_peak = piece.feed
            t_acc = t_dec = 0.0
            v_in = v_out = v_peak
        else:
            reachable = math.sqrt((2.0 * accel * piece.length + v_in**2 + v_out**2) / 2.0)
            if reachable < piece.feed * (1.0 - FEED_TOLERANCE):
                raise InfeasibleProfileError(
                    f"piece {i} of length {kind.position_from_si(piece.length):.6g} {kind.position_unit} cannot reach its feed",
                    kind.feed_from_si(reachable),
                )
            v_peak = piece.feed
            t_acc = (v_peak - v_in) / accel
            t_dec = (v_peak - v_out) / accel
        d_acc = (v_peak**2 - v_in**2) / (2.0 * accel)
        d_dec = (v_peak**2 - v_out**2) / (2.0 * accel)
        t_cruise = max(piece.length - d_acc - d_dec, 0.0) / v_peak
        timings.append(
            PieceTiming(t0=t0, s0=s0, length=piece.length, v_in=v_in, v_peak=v_peak, v_out=v_out, accel=accel, t_acc=t_acc, t_cruise=t_cruise, t_dec=t_dec)
        )
        t0 += t_acc + t_cruise + t_dec
        s0 += piece.length
    return timings


def plan_path(spec: PathSpec, profile: FeedProfile, t_sp: float, kind: AxisKind = AxisKind.LINEAR) -> PathPlan:
    pieces, start = _build_pieces(spec, kind)
    cap = profile.max_feed * kind.feed_scale
    for piece in pieces:
        if piece.feed > cap:
            logger.warning("programmed feed %.6g exceeds the profile cap %.6g, clipping", kind.feed_from_si(piece.feed), profile.max_feed)
            piece.feed = cap
    pieces = [p for p in pieces if p.length > 0.0]
    timings = _plan_timings(pieces, profile.max_acceleration, t_sp, kind)
    filter_len = 1
    if math.isfinite(profile.max_jerk) and math.isfinite(profile.max_acceleration):
        filter_len = max(1, round(profile.max_acceleration / profile.max_jerk / t_sp))
    return PathPlan(spec.axis_names, kind, pieces, timings, start, t_sp, filter_len)
