from .chain import STAGE_ORDER, IdentificationInputs, IdentificationManifest, identify_axis, with_current_noise
from .delays import active_feedforwards, calibrate_delays, search_delay
from .feedforward import fit_feedforward
from .friction import extract_friction_points, fit_friction
from .inertia import estimate_inertia, estimate_static_load, inertia_from_samples
from .report import IdentReport, r_squared


__all__ = [
    "IdentReport",
    "IdentificationInputs",
    "IdentificationManifest",
    "STAGE_ORDER",
    "active_feedforwards",
    "calibrate_delays",
    "estimate_inertia",
    "estimate_static_load",
    "extract_friction_points",
    "fit_feedforward",
    "fit_friction",
    "identify_axis",
    "inertia_from_samples",
    "r_squared",
    "with_current_noise",
]
