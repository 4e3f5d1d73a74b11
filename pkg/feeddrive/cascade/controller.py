"""Industrial cascade: P position loop, PI velocity loop, PI current loop.

Loop outputs are latched between ticks (zero-order hold). The velocity setpoint
is the held position-loop output plus the delayed velocity feedforward, read
at every velocity tick so the feedforward ramp is not staircased at t_sp. The
velocity PI works in torque units and is divided by K_t to produce the current
setpoint.
"""

from dataclasses import dataclass, field

from pydantic import BaseModel, ConfigDict

from feeddrive.cascade.delay import DelayLine, delay_steps
from feeddrive.core.parameters import AxisParameters


DEFAULT_VOLTAGE_LIMIT = 400.0
DEFAULT_CURRENT_LIMIT = 30.0


class ActuatorLimits(BaseModel):
    model_config = ConfigDict(frozen=True)

    voltage: float = DEFAULT_VOLTAGE_LIMIT
    current: float = DEFAULT_CURRENT_LIMIT


class FeedforwardFlags(BaseModel):
    model_config = ConfigDict(frozen=True)

    velocity: bool = True
    torque: bool = True


def position_tick(p: AxisParameters, psec_delayed: float, measured_pos: float, vffw_term: float = 0.0) -> float:
    """Velocity setpoint in motor rad/s from SI positions and an axis-velocity feedforward."""
    v_axis = p.k_p_si * (psec_delayed - measured_pos) + vffw_term
    return v_axis / p.transmission_si


@dataclass(slots=True)
class CascadeState:
    vel_integral: float = 0.0
    cur_integral: float = 0.0
    alpha_line: DelayLine = field(default_factory=lambda: DelayLine(0))
    beta_line: DelayLine = field(default_factory=lambda: DelayLine(0))
    gamma_line: DelayLine = field(default_factory=lambda: DelayLine(0))
    position_output: float = 0.0
    omega_setpoint: float = 0.0
    current_setpoint: float = 0.0
    voltage: float = 0.0
    psec_delayed: float = 0.0
    vffw_delayed: float = 0.0
    tffw_delayed: float = 0.0
    current_saturations: int = 0
    voltage_saturations: int = 0


class CascadeController:
    def __init__(
        self,
        p: AxisParameters,
        plant_step: float,
        limits: ActuatorLimits | None = None,
        psec_initial: float = 0.0,
    ):
        self.params = p
        self.limits = limits or ActuatorLimits()
        self.state = CascadeState(
            alpha_line=DelayLine(delay_steps(p.alpha, plant_step), psec_initial),
            beta_line=DelayLine(delay_steps(p.beta, plant_step)),
            gamma_line=DelayLine(delay_steps(p.gamma, plant_step)),
            psec_delayed=psec_initial,
        )
        self._k_v = p.k_v
        self._inv_tv = 1.0 / p.t_v
        self._t_sv = p.t_sv
        self._inv_kt = 1.0 / p.k_t
        self._k_i = p.k_i
        self._inv_ti = 1.0 / p.t_i
        self._t_si = p.t_si
        self._inv_trans = 1.0 / p.transmission_si

    def push_setpoints(self, psec: float, vffw: float, tffw: float) -> None:
        """Advance the three adjustment delay lines by one plant step."""
        s = self.state
        s.psec_delayed = s.alpha_line.push(psec)
        s.vffw_delayed = s.beta_line.push(vffw)
        s.tffw_delayed = s.gamma_line.push(tffw)

    def position_tick(self, measured_pos: float) -> float:
        """Proportional part of the velocity setpoint in motor rad/s, held until the next tick."""
        s = self.state
        s.position_output = position_tick(self.params, s.psec_delayed, measured_pos)
        return s.position_output

    def hold_position_output(self, omega: float) -> None:
        """Latch an externally computed position-loop output (RST) in motor rad/s."""
        self.state.position_output = omega

    def velocity_setpoint(self) -> float:
        s = self.state
        s.omega_setpoint = s.position_output + s.vffw_delayed * self._inv_trans
        return s.omega_setpoint

    def velocity_tick(self, v_setpoint: float, measured_omega: float, tffw_term: float) -> float:
        """Current setpoint in A; the integrator is frozen while the output is clamped."""
        s = self.state
        e = v_setpoint - measured_omega
        torque = self._k_v * (e + s.vel_integral * self._inv_tv) + tffw_term
        i_set = torque * self._inv_kt
        limit = self.limits.current
        if i_set > limit or i_set < -limit:
            i_set = limit if i_set > 0.0 else -limit
            s.current_saturations += 1
            if (e > 0.0) != (i_set > 0.0):
                s.vel_integral += e * self._t_sv
        else:
            s.vel_integral += e * self._t_sv
        s.current_setpoint = i_set
        return i_set

    def current_tick(self, i_setpoint: float, measured_i: float) -> float:
        s = self.state
        e = i_setpoint - measured_i
        u = self._k_i * (e + s.cur_integral * self._inv_ti)
        limit = self.limits.voltage
        if u > limit or u < -limit:
            u = limit if u > 0.0 else -limit
            s.voltage_saturations += 1
            if (e > 0.0) != (u > 0.0):
                s.cur_integral += e * self._t_si
        else:
            s.cur_integral += e * self._t_si
        s.voltage = u
        return u
