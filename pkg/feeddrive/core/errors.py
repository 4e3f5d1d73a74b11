from typing import Any


class FeedDriveError(Exception):
    """Base class of every error raised by feeddrive."""

    exit_code: int = 1


class ProfileError(FeedDriveError):
    """Raised when a machine profile is invalid or does not match a request."""

    exit_code = 2

    def __init__(self, message: str, issues: list[Any] | None = None):
        super().__init__(message)
        self.issues = issues or []


class TraceFormatError(FeedDriveError):
    """Raised when a trace file or trace object violates the schema."""

    exit_code = 3

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TrajectoryError(FeedDriveError):
    exit_code = 4


class InfeasibleProfileError(TrajectoryError):
    """The programmed feed cannot be reached within the available distance."""

    def __init__(self, message: str, achievable_feed: float):
        super().__init__(f"{message} (achievable peak feed: {achievable_feed:.6g})")
        self.achievable_feed = achievable_feed


class PlantFault(FeedDriveError):
    """Non-finite plant state."""

    exit_code = 5

    def __init__(self, quantity: str, value: float):
        super().__init__(f"plant state became non-finite: {quantity}={value}")
        self.quantity = quantity
        self.value = value


class ControllerError(FeedDriveError):
    exit_code = 6


class ReferenceWindowError(ControllerError):
    def __init__(self, required: int, available: int):
        super().__init__(f"RST controller needs {required} future reference samples, got {available}")
        self.required = required
        self.available = available


class SynthesisError(FeedDriveError):
    exit_code = 7

    def __init__(self, message: str, condition_number: float | None = None):
        if condition_number is not None:
            message = f"{message} (condition number {condition_number:.3e})"
        super().__init__(message)
        self.condition_number = condition_number


class ModelFitError(SynthesisError):
    pass


class StepOvershootError(ModelFitError):
    """A first-order lag cannot follow a step response that overshoots its final value."""

    def __init__(self, overshoot: float):
        super().__init__(f"velocity step response is not monotone: overshoot {overshoot:.4f} above the final value")
        self.overshoot = overshoot


class IdentificationError(FeedDriveError):
    exit_code = 8

    def __init__(self, message: str, best_residual: float | None = None):
        super().__init__(message)
        self.best_residual = best_residual


class ScenarioError(FeedDriveError):
    exit_code = 9
