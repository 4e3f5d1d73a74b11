"""Prediction model seen by the RST position controller.

The closed velocity loop is fitted on a simulated small-signal velocity step of
the plant with the velocity and current loops, then put in series with the
position integrator and discretized at t_sp. A first-order lag with dead time
is tried first; a response that overshoots or that the lag misses by more than
MAX_FIT_RMS is refitted as a second-order loop with the PI zero.
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import optimize

from feeddrive.cascade.controller import CascadeController
from feeddrive.cascade.delay import delay_steps
from feeddrive.core.errors import ModelFitError, StepOvershootError
from feeddrive.core.parameters import DEFAULT_PLANT_STEP, AxisParameters
from feeddrive.gpc.carima import CarimaModel, zoh_integrator_model
from feeddrive.plant import Plant, PlantState


logger = logging.getLogger(__name__)

STEP_FEED = 0.2  # m/min or rpm, small enough to keep the current loop linear
FIT_PERIODS = 50
SETTLE_TOLERANCE = 0.05
OVERSHOOT_TOLERANCE = 0.05
MAX_FIT_RMS = 0.02


class VelocityStepResponse(BaseModel):
    """Axis velocity normalized by the commanded step, sampled every t_sv."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    response: np.ndarray
    step: float


class VelocityLoopFit(BaseModel):
    """Closed velocity loop as exp(-dead_time s) num(s) / den(s), descending powers of s."""

    model_config = ConfigDict(frozen=True)

    order: int
    num: list[float]
    den: list[float]
    dead_time: float = 0.0
    rms: float = 0.0

    def step_response(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        q = self.parameters()
        if self.order == 1:
            return _first_order(t, q["tau"], self.dead_time)
        return _second_order(t, q["omega_n"], q["zeta"], q["t_zero"], self.dead_time)

    def parameters(self) -> dict[str, float]:
        if self.order == 1:
            return {"tau": self.den[0], "dead_time": self.dead_time}
        wn2 = self.den[2]
        wn = float(np.sqrt(wn2))
        return {"omega_n": wn, "zeta": self.den[1] / (2.0 * wn), "t_zero": self.num[0] / wn2, "dead_time": self.dead_time}

    def describe(self) -> str:
        return ", ".join(f"{k}={v:.4g}" for k, v in self.parameters().items())


def simulate_velocity_step(
    p: AxisParameters,
    plant_step: float = DEFAULT_PLANT_STEP,
    feed: float = STEP_FEED,
    periods: int = FIT_PERIODS,
) -> VelocityStepResponse:
    """Step the velocity setpoint of the velocity/current loops and record the axis velocity.

    Friction and load are off: the fit describes the linear loop, which is
    what the position controller sees around any operating point.
    """
    plant = Plant(p, friction=False, load=False)
    ctrl = CascadeController(p, plant_step)
    n_sv = delay_steps(p.t_sv, plant_step)
    n_si = delay_steps(p.t_si, plant_step)
    n_total = delay_steps(p.t_sp, plant_step) * periods

    v_step = p.feed_to_si(feed)
    omega_set = v_step / p.transmission_si
    state = PlantState()
    i_set = 0.0
    voltage = 0.0
    times, velocities = [], []
    for k in range(n_total + 1):
        if k % n_sv == 0:
            times.append(k * plant_step)
            velocities.append(state.omega * p.transmission_si)
            i_set = ctrl.velocity_tick(omega_set, state.omega, 0.0)
        if k % n_si == 0:
            voltage = ctrl.current_tick(i_set, state.current)
        state = plant.step(state, voltage, plant_step)
    s = ctrl.state
    if s.current_saturations or s.voltage_saturations:
        raise ModelFitError(f"axis {p.name}: a {feed:g} velocity step saturates the drive, the loop is not linear")
    return VelocityStepResponse(times=np.array(times), response=np.array(velocities) / v_step, step=v_step)


def _check_settled(y: np.ndarray) -> None:
    if abs(y[-1] - 1.0) > SETTLE_TOLERANCE:
        raise ModelFitError(f"velocity step did not settle: final value {y[-1]:.4f} of the commanded step")
    if y.min() < -SETTLE_TOLERANCE:
        raise ModelFitError(f"velocity step response is not monotone: undershoot {y.min():.4f}")


def _rms(fit: np.ndarray, y: np.ndarray) -> float:
    return float(np.sqrt(np.mean((fit - y) ** 2)))


def _first_order(t: np.ndarray, tau: float, dead_time: float) -> np.ndarray:
    lag = np.maximum(t - dead_time, 0.0)
    return 1.0 - np.exp(-lag / tau)


def fit_lag(step: VelocityStepResponse) -> VelocityLoopFit:
    """First-order lag with dead time; refuses responses a lag cannot follow."""
    y, t = step.response, step.times
    _check_settled(y)
    overshoot = float(y.max() - y[-1])
    if overshoot > OVERSHOOT_TOLERANCE:
        raise StepOvershootError(overshoot)
    crossed = np.nonzero(y >= 1.0 - np.exp(-1.0))[0]
    tau0 = float(t[crossed[0]]) if len(crossed) and t[crossed[0]] > 0.0 else float(t[-1]) / 10.0
    try:
        (tau, dead_time), _ = optimize.curve_fit(_first_order, t, y, p0=[tau0, 0.0], bounds=([1e-7, 0.0], [np.inf, t[-1] / 4.0]))
    except (RuntimeError, ValueError) as e:
        raise ModelFitError(f"lag fit failed: {e}") from e
    return VelocityLoopFit(
        order=1,
        num=[1.0],
        den=[float(tau), 1.0],
        dead_time=float(dead_time),
        rms=_rms(_first_order(t, tau, dead_time), y),
    )


def _second_order(t: np.ndarray, wn: float, zeta: float, t_zero: float, dead_time: float) -> np.ndarray:
    """Step response of (1 + t_zero s) wn^2 / (s^2 + 2 zeta wn s + wn^2) by partial fractions."""
    if abs(zeta - 1.0) < 1e-7:
        zeta = 1.0 + 1e-7
    root = np.sqrt(complex(zeta * zeta - 1.0))
    p1, p2 = wn * (-zeta + root), wn * (-zeta - root)
    wn2 = wn * wn
    r1 = wn2 * (1.0 + t_zero * p1) / (p1 * (p1 - p2))
    r2 = wn2 * (1.0 + t_zero * p2) / (p2 * (p2 - p1))
    lag = np.maximum(t - dead_time, 0.0)
    return 1.0 + (r1 * np.exp(p1 * lag) + r2 * np.exp(p2 * lag)).real


def _second_order_polys(wn: float, zeta: float, t_zero: float) -> tuple[list[float], list[float]]:
    wn2 = wn * wn
    return [t_zero * wn2, wn2], [1.0, 2.0 * zeta * wn, wn2]


def fit_second_order(step: VelocityStepResponse) -> VelocityLoopFit:
    """(1 + t_zero s) wn^2 / (s^2 + 2 zeta wn s + wn^2) with dead time, best of a few starts."""
    y, t = step.response, step.times
    _check_settled(y)

    half = np.nonzero(y >= 0.5)[0]
    t50 = float(t[half[0]]) if len(half) and t[half[0]] > 0.0 else float(t[-1]) / 10.0
    lower = [1e-3 / t[-1], 0.05, 0.0, 0.0]
    upper = [1e3 / t50, 5.0, t[-1], t[-1] / 4.0]
    best = None
    for scale in (0.5, 1.0, 2.0):
        wn0 = scale * 1.5 / t50
        try:
            params, _ = optimize.curve_fit(_second_order, t, y, p0=[wn0, 0.5, 0.5 / wn0, 0.0], bounds=(lower, upper))
        except (RuntimeError, ValueError) as e:
            logger.debug("second-order start %.3g rad/s failed: %s", wn0, e)
            continue
        rms = _rms(_second_order(t, *params), y)
        if best is None or rms < best[1]:
            best = (params, rms)
    if best is None:
        raise ModelFitError("second-order velocity loop fit failed from every starting point")
    (wn, zeta, t_zero, dead_time), rms = best
    num, den = _second_order_polys(wn, zeta, t_zero)
    return VelocityLoopFit(order=2, num=num, den=den, dead_time=float(dead_time), rms=rms)


def fit_velocity_loop(step: VelocityStepResponse) -> VelocityLoopFit:
    """Lowest order whose fit stays within MAX_FIT_RMS of the simulated step."""
    try:
        fit = fit_lag(step)
        if fit.rms <= MAX_FIT_RMS:
            return fit
        reason = f"lag rms {fit.rms:.4f}"
    except StepOvershootError as e:
        reason = str(e)
    logger.info("first-order velocity loop rejected (%s), fitting second order", reason)
    fit = fit_second_order(step)
    if fit.rms > MAX_FIT_RMS:
        raise ModelFitError(f"second-order velocity loop misses the simulated step: rms {fit.rms:.4f} > {MAX_FIT_RMS}")
    return fit


def model_from_axis(p: AxisParameters, plant_step: float = DEFAULT_PLANT_STEP) -> CarimaModel:
    fit = fit_velocity_loop(simulate_velocity_step(p, plant_step))
    logger.info("axis %s: velocity loop order %d (%s, rms %.4f)", p.name, fit.order, fit.describe(), fit.rms)
    return zoh_integrator_model(fit.num, fit.den, p.t_sp, fit.dead_time, fit=fit.parameters())
