"""Staged calibration of the adjustment delays.

alpha comes from a run without feedforward, beta from a run with velocity
feedforward only (alpha fixed), gamma from a run with both (alpha and beta
fixed). Each stage minimizes the squared deviation between simulated and
measured positions: a coarse grid, a bounded golden-section refinement, and a
final polish over neighbouring plant steps.
"""

import logging
from typing import Callable

import numpy as np
from scipy import optimize

from feeddrive.cascade.controller import FeedforwardFlags
from feeddrive.core.errors import IdentificationError
from feeddrive.core.parameters import AxisParameters
from feeddrive.core.trace import Trace
from feeddrive.engine.scenario import SimulationOptions
from feeddrive.engine.simulator import AxisSimulator
from feeddrive.identification.report import IdentReport


logger = logging.getLogger(__name__)

DEFAULT_MAX_DELAY = 0.02
DEFAULT_GRID_STEP = 1e-3
POLISH_STEPS = 2
FLAT_TOLERANCE = 1e-6

STAGES = (
    ("alpha", FeedforwardFlags(velocity=False, torque=False)),
    ("beta", FeedforwardFlags(velocity=True, torque=False)),
    ("gamma", FeedforwardFlags(velocity=True, torque=True)),
)


def active_feedforwards(trace: Trace) -> FeedforwardFlags:
    """Which feedforward paths were enabled during a recorded run."""
    return FeedforwardFlags(
        velocity=bool(np.any(trace["vffws"] != 0.0)),
        torque=bool(np.any(trace["tffws"] != 0.0)),
    )


def _stage_cost(p: AxisParameters, run: Trace, field: str, flags: FeedforwardFlags, options: SimulationOptions) -> Callable[[int], float]:
    dt = options.plant_step
    sim_options = options.model_copy(update={"full_rate": False, "channels": ["sp"]})
    cache: dict[int, float] = {}

    def cost(n: int) -> float:
        n = max(int(n), 0)
        if n not in cache:
            q = p.model_copy(update={field: n * dt})
            sp = AxisSimulator(q, sim_options, feedforward=flags).run(run["psec"]).trace["sp"]
            cache[n] = float(np.sum((sp - run["sp"]) ** 2))
        return cache[n]

    return cost


def search_delay(cost: Callable[[int], float], dt: float, max_delay: float, grid_step: float) -> tuple[int, list[str], list[str]]:
    """Best delay in plant steps, diagnostics and warnings."""
    stride = max(1, round(grid_step / dt))
    grid = list(range(0, round(max_delay / dt) + 1, stride))
    values = np.array([cost(n) for n in grid])
    k0 = int(np.argmin(values))
    n0 = grid[k0]

    warnings: list[str] = []
    floor = values[k0] * (1.0 + FLAT_TOLERANCE) + 1e-30
    minima = [grid[k] for k in range(len(grid)) if values[k] <= floor and (k == 0 or values[k] <= values[k - 1]) and (k == len(grid) - 1 or values[k] <= values[k + 1])]
    if len(minima) > 1:
        warnings.append("flat or multi-minimum objective; candidates (ms): " + ", ".join(f"{n * dt * 1e3:.3f}" for n in minima))
        logger.warning(warnings[-1])

    lo, hi = max(0, n0 - stride), n0 + stride
    res = optimize.minimize_scalar(lambda x: cost(round(x)), bounds=(lo, hi), method="bounded", options={"xatol": 0.5})
    n1 = int(round(res.x))
    candidates = sorted({n0} | set(range(max(0, n1 - POLISH_STEPS), n1 + POLISH_STEPS + 1)))
    best = min(candidates, key=lambda n: (cost(n), n))
    diagnostics = [f"grid minimum {n0 * dt * 1e3:.3f} ms, refined {n1 * dt * 1e3:.3f} ms, final {best * dt * 1e3:.3f} ms (cost {cost(best):.6g})"]
    return best, diagnostics, warnings


def calibrate_delays(
    runs: list[Trace],
    p: AxisParameters,
    options: SimulationOptions | None = None,
    max_delay: float = DEFAULT_MAX_DELAY,
    grid_step: float = DEFAULT_GRID_STEP,
) -> tuple[float, float, float, IdentReport]:
    """Recover (alpha, beta, gamma) from three runs of one path, recorded at t_sp.

    The runs must come in order: no feedforward, velocity feedforward only,
    both feedforwards. Each carries psec, sp, vffws and tffws channels.
    """
    options = options or SimulationOptions()
    if len(runs) != 3:
        raise IdentificationError(f"delay calibration needs three runs, got {len(runs)}")
    for k, ((field, expected), run) in enumerate(zip(STAGES, runs), start=1):
        got = active_feedforwards(run)
        if got != expected:
            raise IdentificationError(
                f"run {k} ({field} stage) must have velocity feedforward {'on' if expected.velocity else 'off'} and torque feedforward "
                f"{'on' if expected.torque else 'off'}; the recorded setpoints say velocity={got.velocity}, torque={got.torque}"
            )
        if abs(run.dt - p.t_sp) > 1e-12:
            raise IdentificationError(f"run {k} must be sampled at t_sp = {p.t_sp} s, got {run.dt} s")

    dt = options.plant_step
    found: dict[str, float] = {}
    diagnostics: list[str] = []
    warnings: list[str] = []
    q = p
    for (field, flags), run in zip(STAGES, runs):
        n, diag, warn = search_delay(_stage_cost(q, run, field, flags, options), dt, max_delay, grid_step)
        found[field] = n * dt
        q = q.model_copy(update={field: n * dt})
        diagnostics += [f"{field}: {d}" for d in diag]
        warnings += [f"{field}: {w}" for w in warn]
        logger.info("delay %s = %.3f ms", field, found[field] * 1e3)

    report = IdentReport(
        stage="delays",
        parameters=found,
        n_samples=sum(len(r) for r in runs),
        diagnostics=diagnostics,
        warnings=warnings,
    )
    return found["alpha"], found["beta"], found["gamma"], report
