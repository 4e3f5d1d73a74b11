from .core import AxisParameters, FeedDriveError, MachineProfile, Trace
from .engine import Scenario, SimulationOptions, compare, run
from .gpc import GpcTuning, synthesize_rst
from .identification import identify_axis
from .io import load_profile, read_trace, write_trace
from .io.scenarios import load_scenario


__version__ = "0.1.0"

__all__ = [
    "AxisParameters",
    "FeedDriveError",
    "GpcTuning",
    "MachineProfile",
    "Scenario",
    "SimulationOptions",
    "Trace",
    "compare",
    "identify_axis",
    "load_profile",
    "load_scenario",
    "read_trace",
    "run",
    "synthesize_rst",
    "write_trace",
]
