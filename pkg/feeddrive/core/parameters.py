import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from feeddrive.core.errors import ProfileError
from feeddrive.core.units import AxisKind


logger = logging.getLogger(__name__)

DEFAULT_PLANT_STEP = 25e-6
FRICTION_CONTINUITY_TOLERANCE = 0.005
PROFILE_FORMAT_VERSION = 1


class FrictionParams(BaseModel):
    """Double-exponential friction law, expressed as an equivalent motor current.

    Velocities are in the axis feed unit (m/min linear, rpm rotary), currents in A.
    """

    model_config = ConfigDict(frozen=True)

    a: float = Field(description="First amplitude, A")
    b: float = Field(description="First exponent, per feed unit")
    c: float = Field(description="Second amplitude, A")
    d: float = Field(description="Second exponent, per feed unit")
    i0: float = Field(description="Coulomb band half-width, A")
    v_fit_max: float = Field(default=20.0, description="Upper bound of the fitted velocity range")
    r_squared: float | None = None
    n_points: int | None = None

    def current(self, v: float) -> float:
        """Evaluate the law for |v| > 0 (odd-symmetric)."""
        if v >= 0.0:
            return self.a * math.exp(self.b * v) + self.c * math.exp(self.d * v)
        return -self.a * math.exp(-self.b * v) - self.c * math.exp(-self.d * v)

    @property
    def continuity_gap(self) -> float:
        """Relative mismatch between the law at 0+ and the Coulomb band."""
        if self.i0 == 0.0:
            return math.inf if (self.a + self.c) != 0.0 else 0.0
        return abs((self.a + self.c) - self.i0) / abs(self.i0)


class AxisParameters(BaseModel):
    """Everything needed to simulate one feed drive.

    Units follow the axis kind: k_p in (m/min)/mm or (deg/min)/deg, transmission
    in mm/rad or deg/rad, static_load_law positions in mm or deg. All times in s.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    kind: AxisKind = AxisKind.LINEAR
    j_eq: float
    k_p: float
    k_v: float
    t_v: float
    k_i: float
    t_i: float
    t_sp: float
    t_sv: float
    t_si: float
    friction: FrictionParams
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    vffw: float = 1.0
    tffw: float = 0.0
    k_t: float
    k_e: float
    r_arm: float
    l_arm: float
    transmission: float
    static_load: float = 0.0
    static_load_law: list[tuple[float, float]] | None = None
    user_supplied: bool = False
    notes: str = ""

    @property
    def k_p_si(self) -> float:
        return self.kind.gain_to_si(self.k_p)

    @property
    def transmission_si(self) -> float:
        return self.kind.transmission_to_si(self.transmission)

    def position_to_si(self, value):
        return self.kind.position_to_si(value)

    def feed_to_si(self, value):
        return self.kind.feed_to_si(value)

    def load_torque(self, axis_pos_si: float) -> float:
        """Resistant torque from gravity at an axis position (SI input)."""
        if not self.static_load_law:
            return self.static_load
        positions, torques = zip(*sorted(self.static_load_law))
        pos = self.kind.position_from_si(axis_pos_si)
        return self.static_load + float(np.interp(pos, positions, torques))


class MachineProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = PROFILE_FORMAT_VERSION
    name: str
    notes: str = ""
    axes: dict[str, AxisParameters]

    def axis(self, name: str) -> AxisParameters:
        if name not in self.axes:
            raise ProfileError(f"axis '{name}' not in profile '{self.name}' (available: {', '.join(self.axes)})")
        return self.axes[name]


class ProfileIssue(BaseModel):
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


def _is_multiple(value: float, step: float) -> bool:
    ratio = value / step
    return abs(ratio - round(ratio)) < 1e-6


def validate_profile(p: AxisParameters, plant_step: float = DEFAULT_PLANT_STEP) -> list[ProfileIssue]:
    """Return every violated invariant of an axis record; empty means valid."""
    issues: list[ProfileIssue] = []

    cycles = {"t_si": p.t_si, "t_sv": p.t_sv, "t_sp": p.t_sp}
    for name, value in cycles.items():
        if not value > 0.0:
            issues.append(ProfileIssue(field=name, message="cycle time must be positive"))
        elif not _is_multiple(value, plant_step):
            issues.append(ProfileIssue(field=name, message=f"cycle time must be a multiple of the plant step {plant_step:g} s"))
    if all(v > 0.0 for v in cycles.values()) and not (p.t_si <= p.t_sv <= p.t_sp):
        issues.append(ProfileIssue(field="t_sp", message="cycle times must satisfy t_si <= t_sv <= t_sp"))

    for name in ("alpha", "beta", "gamma"):
        value = getattr(p, name)
        if value < 0.0:
            issues.append(ProfileIssue(field=name, message="delay must be non-negative"))
        elif not _is_multiple(value, plant_step):
            issues.append(ProfileIssue(field=name, message=f"delay must be a multiple of the plant step {plant_step:g} s"))

    if not p.j_eq > 0.0:
        issues.append(ProfileIssue(field="j_eq", message="equivalent inertia must be positive"))
    if not p.k_t > 0.0:
        issues.append(ProfileIssue(field="k_t", message="torque constant must be positive"))
    if p.transmission == 0.0:
        issues.append(ProfileIssue(field="transmission", message="transmission must be non-zero"))
    for name in ("t_v", "t_i", "l_arm"):
        if not getattr(p, name) > 0.0:
            issues.append(ProfileIssue(field=name, message="must be positive"))

    fp = p.friction
    if fp.i0 < 0.0:
        issues.append(ProfileIssue(field="friction.i0", message="Coulomb band must be non-negative"))
    elif fp.continuity_gap > FRICTION_CONTINUITY_TOLERANCE:
        issues.append(
            ProfileIssue(
                field="friction.i0",
                message=f"friction continuity: a + c = {fp.a + fp.c:.6g} A differs from i0 = {fp.i0:.6g} A by more than 0.5%",
            )
        )
    return issues


def require_valid(p: AxisParameters, plant_step: float = DEFAULT_PLANT_STEP) -> AxisParameters:
    issues = validate_profile(p, plant_step)
    if issues:
        raise ProfileError(f"axis '{p.name}' is invalid: " + "; ".join(str(i) for i in issues), issues)
    return p
