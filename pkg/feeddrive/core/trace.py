from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from feeddrive.core.errors import TraceFormatError


CHANNEL_REGISTRY: dict[str, str] = {
    "psec": "position setpoint at entrance of the controller",
    "sp": "simulated (or measured) axis position",
    "sv": "simulated axis velocity",
    "smc": "simulated motor current",
    "vffws": "velocity feedforward setpoint",
    "tffws": "torque feedforward setpoint",
    "torque": "motor torque K_t * i",
    "pos_err": "position-loop following error",
    "p_elec": "electrical input power U * i",
    "p_mech": "mechanical output power K_t * i * omega",
}


class Trace(BaseModel):
    """Uniformly sampled set of named channels."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dt: float
    t0: float = 0.0
    channels: dict[str, np.ndarray]
    units: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="before")
    @classmethod
    def _coerce_arrays(cls, data: Any) -> Any:
        if isinstance(data, dict) and "channels" in data:
            data = dict(data)
            data["channels"] = {k: np.asarray(v, dtype=float) for k, v in data["channels"].items()}
        return data

    @model_validator(mode="after")
    def _check(self) -> "Trace":
        if not self.dt > 0.0:
            raise TraceFormatError(f"sampling period must be positive, got {self.dt}")
        unknown = [name for name in self.channels if name not in CHANNEL_REGISTRY]
        if unknown:
            raise TraceFormatError(f"unknown channel(s): {', '.join(unknown)}")
        lengths = {len(v) for v in self.channels.values()}
        if len(lengths) > 1:
            raise TraceFormatError(f"channels have unequal lengths: {sorted(lengths)}")
        return self

    def __len__(self) -> int:
        for values in self.channels.values():
            return len(values)
        return 0

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.channels[name]
        except KeyError:
            raise TraceFormatError(f"trace has no channel '{name}'") from None

    def __contains__(self, name: str) -> bool:
        return name in self.channels

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def unit(self, name: str) -> str:
        return self.units.get(name, "")

    def with_channels(self, channels: dict[str, np.ndarray], units: dict[str, str] | None = None) -> "Trace":
        merged = dict(self.channels)
        merged.update(channels)
        merged_units = dict(self.units)
        merged_units.update(units or {})
        return Trace(dt=self.dt, t0=self.t0, channels=merged, units=merged_units)

    def select(self, names: list[str]) -> "Trace":
        return Trace(
            dt=self.dt,
            t0=self.t0,
            channels={n: self[n] for n in names},
            units={n: self.unit(n) for n in names if n in self.units},
        )

    def equals(self, other: "Trace") -> bool:
        """Bit-identical comparison."""
        if self.dt != other.dt or self.t0 != other.t0 or self.channels.keys() != other.channels.keys():
            return False
        return all(np.array_equal(self.channels[k], other.channels[k]) for k in self.channels)
