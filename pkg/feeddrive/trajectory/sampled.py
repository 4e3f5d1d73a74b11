import logging
import math
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from feeddrive.core.errors import TrajectoryError
from feeddrive.core.trace import Trace
from feeddrive.core.units import AxisKind
from feeddrive.io.traces import read_table


logger = logging.getLogger(__name__)


class SampledPsec(BaseModel):
    """Per-axis PSEC and the largest displacement resampling introduced (SI)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    traces: dict[str, Trace]
    max_displacement: float


def ingest_sampled(path: str | Path, t_sp: float, axes: list[str] | None = None, kind: AxisKind = AxisKind.LINEAR) -> SampledPsec:
    """Resample a sampled path to t_sp by linear interpolation.

    Columns are named after the axes and given in display units (mm or deg).
    The reported displacement is the largest distance between an input sample
    and the polyline through the resampled points (SI units).
    """
    table = read_table(path)
    axes = axes or list(table.columns)
    missing = [a for a in axes if a not in table.columns]
    if missing:
        raise TrajectoryError(f"{path}: missing axis column(s) {', '.join(missing)}")
    for a in axes:
        unit = table.units[a]
        if unit and unit != kind.position_unit:
            raise TrajectoryError(f"{path}: axis {a} is in '{unit}', expected '{kind.position_unit}'")

    t_in = table.times
    span = float(t_in[-1] - t_in[0])
    n = int(math.floor(span / t_sp + 1e-9)) + 1
    t_out = t_in[0] + t_sp * np.arange(n)

    traces: dict[str, Trace] = {}
    deviation = np.zeros(len(t_in))
    for a in axes:
        x_in = kind.position_to_si(table.columns[a])
        x_out = np.interp(t_out, t_in, x_in)
        if n > 1:
            deviation += (np.interp(t_in, t_out, x_out) - x_in) ** 2
        traces[a] = Trace(dt=t_sp, t0=float(t_in[0]), channels={"psec": x_out}, units={"psec": kind.si_position_unit})
    max_displacement = float(np.sqrt(deviation[t_in <= t_out[-1]].max()))
    logger.info("resampled %s: %d -> %d samples, max displacement %.3g", path, len(t_in), n, max_displacement)
    return SampledPsec(traces=traces, max_displacement=max_displacement)
