import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class IdentReport(BaseModel):
    """Outcome of one identification stage."""

    model_config = ConfigDict(frozen=True)

    stage: str
    parameters: dict[str, float] = Field(default_factory=dict)
    rms: float | None = None
    r_squared: float | None = None
    n_samples: int = 0
    diagnostics: list[str] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)


def r_squared(y: np.ndarray, residual: np.ndarray) -> float:
    """Coefficient of determination clipped to [0, 1]."""
    rss = float(np.sum(residual**2))
    tss = float(np.sum((y - np.mean(y)) ** 2))
    if tss == 0.0:
        return 1.0 if rss <= 1e-24 else 0.0
    return float(np.clip(1.0 - rss / tss, 0.0, 1.0))
