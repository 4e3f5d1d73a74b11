"""Continuous-time physics of one feed drive.

States are the armature current, the motor angular velocity and the motor
angle. The axis position is always derived from the motor angle.
"""

import logging
import math
from typing import NamedTuple

from feeddrive.core.errors import PlantFault
from feeddrive.core.parameters import AxisParameters, FrictionParams


logger = logging.getLogger(__name__)

ZERO_VELOCITY_BAND = 1e-4  # feed units (m/min or rpm)


class PlantState(NamedTuple):
    current: float = 0.0
    omega: float = 0.0
    theta: float = 0.0

    def axis_pos(self, transmission_si: float) -> float:
        return self.theta * transmission_si


def friction_current(fp: FrictionParams, v: float, k_t: float, applied_torque: float = 0.0) -> float:
    """Equivalent friction current (A) for an axis velocity in feed units.

    Inside the zero-velocity band the friction balances the applied torque up
    to the Coulomb band (stiction).
    """
    if v > ZERO_VELOCITY_BAND:
        return fp.a * math.exp(fp.b * v) + fp.c * math.exp(fp.d * v)
    if v < -ZERO_VELOCITY_BAND:
        return -fp.a * math.exp(-fp.b * v) - fp.c * math.exp(-fp.d * v)
    return min(max(applied_torque / k_t, -fp.i0), fp.i0)


class Plant:
    """Fixed-step RK4 integrator of the motor, friction and load equations."""

    def __init__(self, p: AxisParameters, friction: bool = True, load: bool = True):
        self.params = p
        self.friction = friction
        self.load = load
        self._r = p.r_arm
        self._inv_l = 1.0 / p.l_arm
        self._k_e = p.k_e
        self._k_t = p.k_t
        self._inv_j = 1.0 / p.j_eq
        self._trans = p.transmission_si
        self._to_feed = p.transmission_si / p.kind.feed_scale
        self._fp = p.friction
        self._band_torque = p.k_t * p.friction.i0
        self._constant_load = p.static_load if load and not p.static_load_law else None

    def load_torque(self, theta: float) -> float:
        if not self.load:
            return 0.0
        if self._constant_load is not None:
            return self._constant_load
        return self.params.load_torque(theta * self._trans)

    def friction_torque(self, omega: float, applied: float) -> float:
        if not self.friction:
            return 0.0
        v = omega * self._to_feed
        fp = self._fp
        if v > ZERO_VELOCITY_BAND:
            return self._k_t * (fp.a * math.exp(fp.b * v) + fp.c * math.exp(fp.d * v))
        if v < -ZERO_VELOCITY_BAND:
            return -self._k_t * (fp.a * math.exp(-fp.b * v) + fp.c * math.exp(-fp.d * v))
        band = self._band_torque
        return min(max(applied, -band), band)

    def resistant_torque(self, state: PlantState) -> float:
        """C_r = K_t * i_friction + gravity load."""
        load = self.load_torque(state.theta)
        applied = self._k_t * state.current - load
        return self.friction_torque(state.omega, applied) + load

    def _derivatives(self, i: float, omega: float, theta: float, u: float) -> tuple[float, float]:
        applied = self._k_t * i - self.load_torque(theta)
        di = (u - self._r * i - self._k_e * omega) * self._inv_l
        domega = (applied - self.friction_torque(omega, applied)) * self._inv_j
        return di, domega

    def step(self, s: PlantState, u: float, dt: float) -> PlantState:
        i0, w0, th0 = s
        h = 0.5 * dt
        d = self._derivatives

        k1i, k1w = d(i0, w0, th0, u)
        k2i, k2w = d(i0 + h * k1i, w0 + h * k1w, th0 + h * w0, u)
        w2 = w0 + h * k1w
        k3i, k3w = d(i0 + h * k2i, w0 + h * k2w, th0 + h * w2, u)
        w3 = w0 + h * k2w
        k4i, k4w = d(i0 + dt * k3i, w0 + dt * k3w, th0 + dt * w3, u)
        w4 = w0 + dt * k3w

        i1 = i0 + dt / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
        w1 = w0 + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        th1 = th0 + dt / 6.0 * (w0 + 2.0 * w2 + 2.0 * w3 + w4)

        if self.friction and w1 != 0.0 and (w0 > 0.0 >= w1 or w0 < 0.0 <= w1):
            applied = self._k_t * i1 - self.load_torque(th1)
            if abs(applied) <= self._band_torque:
                w1 = 0.0

        if not (math.isfinite(i1) and math.isfinite(w1) and math.isfinite(th1)):
            for name, value in (("current", i1), ("omega", w1), ("theta", th1)):
                if not math.isfinite(value):
                    raise PlantFault(name, value)
        return PlantState(i1, w1, th1)


def plant_step(p: AxisParameters, s: PlantState, u_voltage: float, dt: float) -> PlantState:
    return Plant(p).step(s, u_voltage, dt)
