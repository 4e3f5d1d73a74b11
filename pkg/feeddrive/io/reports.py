"""JSON summaries written next to the trace CSVs.

Every document carries a top-level format_version. Lengths are in the SI
unit of the axis (m or rad).
"""

import json
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from feeddrive.engine.metrics import PhaseMetrics
from feeddrive.engine.runner import Comparison, RunResult
from feeddrive.engine.sweep import SweepTable
from feeddrive.identification.report import IdentReport
from feeddrive.io.traces import write_trace
from feeddrive.trajectory.planner import MotionPhase


REPORT_FORMAT_VERSION = 1


class AxisSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    metrics: PhaseMetrics
    max_feed: float
    current_saturations: int
    voltage_saturations: int
    phase_delay: float = 0.0
    trace_file: str | None = None


class RunSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = REPORT_FORMAT_VERSION
    scenario: str
    max_error: float
    axes: dict[str, AxisSummary]
    vector: PhaseMetrics | None = None
    contour_max: float | None = None
    corner_deviation: float | None = None
    phases: list[MotionPhase] = Field(default_factory=list)
    psec_displacement: float = 0.0
    warnings: list[str] = Field(default_factory=list)

    @classmethod
    def of(cls, result: RunResult, trace_files: dict[str, str] | None = None) -> "RunSummary":
        trace_files = trace_files or {}
        return cls(
            scenario=result.scenario,
            max_error=result.max_error,
            axes={
                name: AxisSummary(
                    metrics=result.metrics[name],
                    max_feed=r.max_feed,
                    current_saturations=r.current_saturations,
                    voltage_saturations=r.voltage_saturations,
                    phase_delay=result.phase_delays.get(name, 0.0),
                    trace_file=trace_files.get(name),
                )
                for name, r in result.axes.items()
            },
            vector=result.vector,
            contour_max=result.contour_max,
            corner_deviation=result.corner_deviation,
            phases=result.phases,
            psec_displacement=result.psec_displacement,
            warnings=result.warnings,
        )


class IdentificationSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = REPORT_FORMAT_VERSION
    axis: str
    stages: dict[str, IdentReport]


def _write_json(doc: dict, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path


def write_run(result: RunResult, out_dir: str | Path, prefix: str | None = None) -> Path:
    """Write one trace CSV per axis and a metrics summary; returns the summary path."""
    out = Path(out_dir)
    prefix = prefix or result.scenario
    files = {}
    for name, r in result.axes.items():
        files[name] = write_trace(r.trace, out / f"{prefix}_{name}.csv").name
    summary = RunSummary.of(result, files)
    return _write_json(summary.model_dump(mode="json"), out / f"{prefix}_metrics.json")


def write_comparison(comparison: Comparison, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    write_run(comparison.cascade, out, f"{comparison.scenario}_cascade")
    write_run(comparison.rst, out, f"{comparison.scenario}_rst")
    doc = {"format_version": REPORT_FORMAT_VERSION, **comparison.summary()}
    return _write_json(doc, out / f"{comparison.scenario}_comparison.json")


def write_sweep(table: SweepTable, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(table.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def write_ident_report(axis: str, reports: dict[str, IdentReport], path: str | Path) -> Path:
    doc = IdentificationSummary(axis=axis, stages=reports)
    return _write_json(doc.model_dump(mode="json"), Path(path))
