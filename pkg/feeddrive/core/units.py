"""Unit conventions.

Linear axes are displayed in mm and m/min, rotary axes in degrees and rpm.
Everything inside the simulator is SI: m or rad for axis positions, m/s or
rad/s for axis velocities, rad and rad/s on the motor shaft.
"""

import math
from enum import StrEnum


MM = 1e-3
DEG = math.pi / 180.0
M_PER_MIN = 1.0 / 60.0
RPM = 2.0 * math.pi / 60.0


class AxisKind(StrEnum):
    LINEAR = "linear"
    ROTARY = "rotary"

    @property
    def position_unit(self) -> str:
        return "mm" if self is AxisKind.LINEAR else "deg"

    @property
    def feed_unit(self) -> str:
        return "m/min" if self is AxisKind.LINEAR else "rpm"

    @property
    def si_position_unit(self) -> str:
        return "m" if self is AxisKind.LINEAR else "rad"

    @property
    def si_velocity_unit(self) -> str:
        return "m/s" if self is AxisKind.LINEAR else "rad/s"

    @property
    def position_scale(self) -> float:
        """SI units per display position unit."""
        return MM if self is AxisKind.LINEAR else DEG

    @property
    def feed_scale(self) -> float:
        """SI units per display feed unit."""
        return M_PER_MIN if self is AxisKind.LINEAR else RPM

    def position_to_si(self, value):
        return value * self.position_scale

    def position_from_si(self, value):
        return value / self.position_scale

    def feed_to_si(self, value):
        return value * self.feed_scale

    def feed_from_si(self, value):
        return value / self.feed_scale

    def gain_to_si(self, k_p: float) -> float:
        """Position gain in (m/min)/mm or (deg/min)/deg to 1/s."""
        if self is AxisKind.LINEAR:
            return k_p * M_PER_MIN / MM
        return k_p / 60.0

    def transmission_to_si(self, transmission: float) -> float:
        """mm/rad or deg/rad to m/rad or rad/rad."""
        return transmission * self.position_scale


def motor_to_axis_velocity(omega, transmission_si: float):
    return omega * transmission_si


def axis_to_motor_velocity(v, transmission_si: float):
    return v / transmission_si


def feed_round_trip(kind: AxisKind, feed: float, transmission: float) -> float:
    """Display feed -> motor rad/s -> display feed."""
    trans_si = kind.transmission_to_si(transmission)
    omega = axis_to_motor_velocity(kind.feed_to_si(feed), trans_si)
    return kind.feed_from_si(motor_to_axis_velocity(omega, trans_si))
