"""Fixed-step multi-rate closed loop of one axis.

Within a plant step the order is: delay lines, position loop (every t_sp),
velocity loop (every t_sv), current loop (every t_si), record, plant. PSEC and
the feedforward setpoints computed on the t_sp grid are linearly interpolated
to the plant step before entering the delay lines. The velocity loop reads the
held position-loop output plus the delayed velocity feedforward.
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from feeddrive.cascade.controller import CascadeController, FeedforwardFlags
from feeddrive.cascade.delay import delay_steps
from feeddrive.cascade.derivatives import euler_d1, euler_d2
from feeddrive.core.parameters import AxisParameters
from feeddrive.core.trace import Trace
from feeddrive.engine.scenario import SimulationOptions
from feeddrive.gpc.rst import RstController
from feeddrive.gpc.synthesis import RstPolynomials
from feeddrive.plant import Plant, PlantState


logger = logging.getLogger(__name__)

NO_FEEDFORWARD = FeedforwardFlags(velocity=False, torque=False)


class AxisRun(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    axis: str
    trace: Trace
    current_saturations: int = 0
    voltage_saturations: int = 0
    max_feed: float = 0.0
    warnings: list[str] = []


def channel_units(p: AxisParameters) -> dict[str, str]:
    pos, vel = p.kind.si_position_unit, p.kind.si_velocity_unit
    return {
        "psec": pos,
        "sp": pos,
        "pos_err": pos,
        "sv": vel,
        "vffws": vel,
        "smc": "A",
        "torque": "N.m",
        "tffws": "N.m",
        "p_elec": "W",
        "p_mech": "W",
    }


def feedforward_setpoints(p: AxisParameters, psec: np.ndarray, flags: FeedforwardFlags) -> tuple[np.ndarray, np.ndarray]:
    """VFFWS (axis velocity) and TFFWS (motor torque) on the t_sp grid; zero when disabled."""
    vff = p.vffw * euler_d1(psec, p.t_sp) if flags.velocity else np.zeros(len(psec))
    tff = p.tffw * euler_d2(psec, p.t_sp) / p.transmission_si if flags.torque else np.zeros(len(psec))
    return vff, tff


class AxisSimulator:
    def __init__(self, p: AxisParameters, options: SimulationOptions | None = None, feedforward: FeedforwardFlags | None = None, rst: RstPolynomials | None = None):
        self.params = p
        self.options = options or SimulationOptions()
        self.feedforward = NO_FEEDFORWARD if rst is not None else (feedforward or FeedforwardFlags())
        self.rst = rst

    def run(self, psec: np.ndarray, n_settle: int = 0) -> AxisRun:
        """Simulate the axis following PSEC sampled at t_sp, held for n_settle extra periods."""
        p, o = self.params, self.options
        dt = o.plant_step
        n_sp = delay_steps(p.t_sp, dt)
        n_sv = delay_steps(p.t_sv, dt)
        n_si = delay_steps(p.t_si, dt)

        psec = np.asarray(psec, dtype=float)
        if n_settle > 0:
            psec = np.concatenate([psec, np.full(n_settle, psec[-1])])
        n = len(psec)
        vff, tff = feedforward_setpoints(p, psec, self.feedforward)

        m_total = (n - 1) * n_sp + 1
        grid = np.arange(m_total) / n_sp
        ticks = np.arange(n)
        psec_f = np.interp(grid, ticks, psec)
        vff_f = np.interp(grid, ticks, vff)
        tff_f = np.interp(grid, ticks, tff)
        psec_l, vff_l, tff_l = psec_f.tolist(), vff_f.tolist(), tff_f.tolist()

        trans = p.transmission_si
        plant = Plant(p, friction=o.friction, load=o.load)
        ctrl = CascadeController(p, dt, o.limits, psec_initial=float(psec[0]))
        cs = ctrl.state
        rst_ctrl = None
        refs: list[float] = []
        horizon = 0
        if self.rst is not None:
            rst_ctrl = RstController(self.rst, y0=float(psec[0]))
            horizon = rst_ctrl.horizon
            refs = np.interp(np.arange(n + horizon + 1) - p.alpha / p.t_sp, ticks, psec).tolist()

        stride = 1 if o.full_rate else n_sp
        n_rec = (m_total - 1) // stride + 1
        rec_theta = np.empty(n_rec)
        rec_omega = np.empty(n_rec)
        rec_i = np.empty(n_rec)
        rec_u = np.empty(n_rec)
        rec_ref = np.empty(n_rec)

        state = PlantState(theta=float(psec[0]) / trans)
        step = plant.step
        i_set = u = 0.0
        for m in range(m_total):
            ctrl.push_setpoints(psec_l[m], vff_l[m], tff_l[m])
            if m % n_sp == 0:
                x = state.theta * trans
                if rst_ctrl is None:
                    ctrl.position_tick(x)
                else:
                    k = m // n_sp
                    ctrl.hold_position_output(rst_ctrl.tick(refs[k + 1 : k + 1 + horizon], x) / trans)
            if m % n_sv == 0:
                i_set = ctrl.velocity_tick(ctrl.velocity_setpoint(), state.omega, cs.tffw_delayed)
            if m % n_si == 0:
                u = ctrl.current_tick(i_set, state.current)
            if m % stride == 0:
                r = m // stride
                rec_theta[r] = state.theta
                rec_omega[r] = state.omega
                rec_i[r] = state.current
                rec_u[r] = u
                rec_ref[r] = cs.psec_delayed
            if m < m_total - 1:
                state = step(state, u, dt)

        sp = rec_theta * trans
        sv = rec_omega * trans
        available = {
            "psec": psec_f[::stride],
            "sp": sp,
            "sv": sv,
            "smc": rec_i,
            "vffws": vff_f[::stride],
            "tffws": tff_f[::stride],
            "torque": p.k_t * rec_i,
            "pos_err": rec_ref - sp,
            "p_elec": rec_u * rec_i,
            "p_mech": p.k_t * rec_i * rec_omega,
        }
        units = channel_units(p)
        trace = Trace(
            dt=dt if o.full_rate else p.t_sp,
            channels={c: available[c] for c in o.channels},
            units={c: units[c] for c in o.channels},
        )

        warnings = []
        max_feed = float(p.kind.feed_from_si(np.max(np.abs(sv)))) if len(sv) else 0.0
        if o.friction and max_feed > p.friction.v_fit_max:
            warnings.append(f"axis {p.name}: friction law extrapolated to {max_feed:.3g} {p.kind.feed_unit} beyond its fit range {p.friction.v_fit_max:g}")
        if cs.current_saturations or cs.voltage_saturations:
            warnings.append(f"axis {p.name}: actuator saturated ({cs.current_saturations} current, {cs.voltage_saturations} voltage ticks)")
        for w in warnings:
            logger.warning(w)
        return AxisRun(
            axis=p.name,
            trace=trace,
            current_saturations=cs.current_saturations,
            voltage_saturations=cs.voltage_saturations,
            max_feed=max_feed,
            warnings=warnings,
        )
