from .errors import (
    ControllerError,
    FeedDriveError,
    IdentificationError,
    InfeasibleProfileError,
    ModelFitError,
    PlantFault,
    ProfileError,
    ReferenceWindowError,
    ScenarioError,
    StepOvershootError,
    SynthesisError,
    TraceFormatError,
    TrajectoryError,
)
from .parameters import (
    DEFAULT_PLANT_STEP,
    AxisParameters,
    FrictionParams,
    MachineProfile,
    ProfileIssue,
    require_valid,
    validate_profile,
)
from .trace import CHANNEL_REGISTRY, Trace
from .units import AxisKind


__all__ = [
    "AxisKind",
    "AxisParameters",
    "CHANNEL_REGISTRY",
    "ControllerError",
    "DEFAULT_PLANT_STEP",
    "FeedDriveError",
    "FrictionParams",
    "IdentificationError",
    "InfeasibleProfileError",
    "MachineProfile",
    "ModelFitError",
    "PlantFault",
    "ProfileError",
    "ProfileIssue",
    "ReferenceWindowError",
    "ScenarioError",
    "StepOvershootError",
    "SynthesisError",
    "Trace",
    "TraceFormatError",
    "TrajectoryError",
    "require_valid",
    "validate_profile",
]
