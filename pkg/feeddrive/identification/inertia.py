"""Equivalent inertia and static loads from recorded currents."""

import logging

import numpy as np

from feeddrive.cascade.derivatives import euler_d1
from feeddrive.core.errors import IdentificationError
from feeddrive.core.parameters import AxisParameters
from feeddrive.core.trace import Trace
from feeddrive.identification.report import IdentReport
from feeddrive.plant import friction_current


logger = logging.getLogger(__name__)

MIN_ACCEL_FRACTION = 0.2
MIN_FEED = 0.05  # m/min or rpm; stiction region excluded
EDGE_TRIM = 0.2  # fraction of each interval dropped at both ends
MIN_INTERVAL_SAMPLES = 5


def inertia_from_samples(k_t: float, current: np.ndarray, resistant_torque: np.ndarray, accel: np.ndarray) -> np.ndarray:
    """J = (K_t i - C_r) / (dOmega/dt), per sample."""
    return (k_t * np.asarray(current) - np.asarray(resistant_torque)) / np.asarray(accel)


def _intervals(mask: np.ndarray) -> list[tuple[int, int]]:
    edges = np.diff(np.concatenate([[0], mask.astype(int), [0]]))
    return list(zip(np.nonzero(edges == 1)[0], np.nonzero(edges == -1)[0]))


def estimate_inertia(trace: Trace, p: AxisParameters) -> tuple[float, IdentReport]:
    """Average J = (K_t i - C_r) / dOmega/dt per accelerating interval, then across intervals.

    p supplies K_t, the transmission, the identified friction law and static load.
    The acceleration is the backward difference of the motor velocity; the
    torque is averaged over the same step.
    """
    omega = trace["sv"] / p.transmission_si
    cur = trace["smc"]
    accel = euler_d1(omega, trace.dt)
    feed = p.kind.feed_from_si(trace["sv"])
    pos = trace["sp"] if "sp" in trace else np.zeros(len(omega))

    fp = p.friction
    c_r = np.array([p.k_t * friction_current(fp, v, p.k_t) for v in feed]) + np.array([p.load_torque(x) for x in pos])
    torque = p.k_t * cur - c_r
    torque_mid = 0.5 * (torque + np.concatenate([[torque[0]], torque[:-1]]))

    peak = float(np.max(np.abs(accel))) if len(accel) else 0.0
    mask = (np.abs(accel) > MIN_ACCEL_FRACTION * peak) & (np.abs(feed) > MIN_FEED) if peak > 0.0 else np.zeros(len(accel), dtype=bool)
    mask[0] = False

    per_interval: list[float] = []
    n_used = 0
    diagnostics = []
    for start, end in _intervals(mask):
        trim = int((end - start) * EDGE_TRIM)
        lo, hi = start + trim, end - trim
        if hi - lo < MIN_INTERVAL_SAMPLES:
            continue
        j = torque_mid[lo:hi] / accel[lo:hi]
        per_interval.append(float(np.mean(j)))
        n_used += hi - lo
        diagnostics.append(f"interval t=[{trace.t0 + start * trace.dt:.4f}, {trace.t0 + end * trace.dt:.4f}] s: J={per_interval[-1]:.6g}")
    if not per_interval:
        raise IdentificationError("no accelerating interval found in the trace")

    j_eq = float(np.mean(per_interval))
    report = IdentReport(
        stage="inertia",
        parameters={"j_eq": j_eq},
        rms=float(np.std(per_interval)),
        n_samples=n_used,
        diagnostics=diagnostics,
    )
    logger.info("inertia: %.6g kg.m^2 from %d intervals", j_eq, len(per_interval))
    return j_eq, report


def estimate_static_load(traces: list[Trace], p: AxisParameters, rest_tolerance: float = 1e-6) -> tuple[float | list[tuple[float, float]], IdentReport]:
    """K_t times the mean current at rest; a position table when several rest positions are given.

    Positions in the table are display units (mm or deg), sorted.
    """
    entries: list[tuple[float, float]] = []
    for k, tr in enumerate(traces):
        v = tr["sv"]
        if np.max(np.abs(v)) > rest_tolerance or np.max(np.abs(euler_d1(v, tr.dt))) > rest_tolerance / tr.dt:
            raise IdentificationError(f"motion detected in rest trace {k}")
        torque = p.k_t * float(np.mean(tr["smc"]))
        position = float(p.kind.position_from_si(np.mean(tr["sp"]))) if "sp" in tr else 0.0
        entries.append((position, torque))
    if not entries:
        raise IdentificationError("no rest traces given")

    report_params = {f"torque@{pos:g}": t for pos, t in entries}
    report = IdentReport(stage="static_load", parameters=report_params, n_samples=sum(len(t) for t in traces))
    if len(entries) == 1:
        return entries[0][1], report
    return sorted(entries), report
