from .metrics import (
    PhaseMetrics,
    TrackingMetrics,
    contour_error_circle,
    delay_phases,
    phase_at,
    phase_metrics,
    polyline_deviation,
    steady_mask,
    tracking_error,
    vector_error,
)
from .runner import Comparison, RunResult, compare, corner_deviation, run, run_batch, settle_window
from .scenario import (
    DEFAULT_CHANNELS,
    CascadeSelection,
    ControllerSelection,
    RstSelection,
    Scenario,
    SimulationOptions,
)
from .simulator import AxisRun, AxisSimulator, feedforward_setpoints
from .sweep import SweepRow, SweepTable, tuning_grid, tuning_sweep


__all__ = [
    "AxisRun",
    "AxisSimulator",
    "CascadeSelection",
    "Comparison",
    "ControllerSelection",
    "DEFAULT_CHANNELS",
    "PhaseMetrics",
    "RstSelection",
    "RunResult",
    "Scenario",
    "SimulationOptions",
    "SweepRow",
    "SweepTable",
    "TrackingMetrics",
    "compare",
    "contour_error_circle",
    "corner_deviation",
    "delay_phases",
    "feedforward_setpoints",
    "phase_at",
    "phase_metrics",
    "polyline_deviation",
    "run",
    "run_batch",
    "settle_window",
    "steady_mask",
    "tracking_error",
    "tuning_grid",
    "tuning_sweep",
    "vector_error",
]
