"""GPC tuning sweeps.

Cells are independent runs. Ranking is by the chosen metric, ties broken on
(N2, Nu, lambda, N1), failed cells last, so the table does not depend on grid
order or on completion order.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Literal

from pydantic import BaseModel, ConfigDict

from feeddrive.core.errors import FeedDriveError
from feeddrive.core.parameters import MachineProfile
from feeddrive.engine.runner import RunResult, run
from feeddrive.engine.scenario import RstSelection, Scenario
from feeddrive.gpc.synthesis import GpcTuning


logger = logging.getLogger(__name__)

SweepMetric = Literal["max", "rms", "contour"]


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    rank: int = 0
    tuning: GpcTuning
    value: float
    max_error: float | None = None
    rms_error: float | None = None
    contour_max: float | None = None
    error: str | None = None


class SweepTable(BaseModel):
    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    format_version: int = 1
    scenario: str
    metric: SweepMetric
    rows: list[SweepRow]

    def best(self) -> SweepRow:
        return self.rows[0]


def tuning_grid(n1: list[int], n2: list[int], nu: list[int], lam: list[float]) -> list[GpcTuning]:
    """Cartesian grid, skipping combinations that violate the horizon constraints."""
    grid = []
    for a, b, c, d in itertools.product(n1, n2, nu, lam):
        if 1 <= a <= b and 1 <= c <= b - a + 1 and d >= 0.0:
            grid.append(GpcTuning(n1=a, n2=b, nu=c, lam=d))
    return grid


def _metric_value(result: RunResult, metric: SweepMetric) -> float:
    if metric == "contour":
        return result.contour_max if result.contour_max is not None else result.max_error
    if metric == "rms":
        if result.vector is not None:
            return result.vector.whole.rms
        return max(m.whole.rms for m in result.metrics.values())
    return result.max_error


def _run_cell(args: tuple[Scenario, GpcTuning, MachineProfile | None, SweepMetric]) -> SweepRow:
    scenario, tuning, profile, metric = args
    try:
        result = run(scenario.with_controller(RstSelection(tuning=tuning)), profile)
    except FeedDriveError as e:
        logger.warning("sweep cell %s failed: %s", tuning.label(), e)
        return SweepRow(tuning=tuning, value=math.inf, error=str(e))
    rms = result.vector.whole.rms if result.vector is not None else max(m.whole.rms for m in result.metrics.values())
    return SweepRow(
        tuning=tuning,
        value=_metric_value(result, metric),
        max_error=result.max_error,
        rms_error=rms,
        contour_max=result.contour_max,
    )


def tuning_sweep(
    scenario: Scenario,
    grid: list[GpcTuning],
    metric: SweepMetric = "max",
    profile: MachineProfile | None = None,
    workers: int = 1,
) -> SweepTable:
    jobs = [(scenario, t, profile, metric) for t in grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, jobs))
    else:
        rows = [_run_cell(j) for j in jobs]
    rows.sort(key=lambda r: (r.error is not None, r.value, r.tuning.sort_key()))
    ranked = [r.model_copy(update={"rank": k}) for k, r in enumerate(rows, start=1)]
    return SweepTable(scenario=scenario.name, metric=metric, rows=ranked)
