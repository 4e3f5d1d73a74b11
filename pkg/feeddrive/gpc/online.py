"""Receding-horizon GPC solved online, and closed-loop runs on the nominal model.

The online controller rebuilds the free response by simulating the CARIMA model
forward and solves the dense least-squares problem every period. On the nominal
model it must reproduce the offline RST controller.
"""

from typing import Callable

import numpy as np

from feeddrive.gpc.carima import CarimaModel
from feeddrive.gpc.rst import RstHistory, rst_tick
from feeddrive.gpc.synthesis import GpcTuning, RstPolynomials


def _model_output(model: CarimaModel, ys: list[float], us: list[float], t: int) -> float:
    """y(t) from past outputs and the inputs known so far; indices below zero are zero."""
    a, b = model.a, model.b
    acc = 0.0
    for k in range(1, len(a)):
        if t - k >= 0:
            acc -= a[k] * ys[t - k]
    for k in range(len(b)):
        if 0 <= t - k < len(us):
            acc += b[k] * us[t - k]
    return acc


def step_response(model: CarimaModel, n: int) -> np.ndarray:
    """y(0..n) for a unit step applied at t = 0."""
    ys: list[float] = []
    us = [1.0] * (n + 1)
    for t in range(n + 1):
        ys.append(_model_output(model, ys, us, t))
    return np.array(ys)


class RecedingHorizonGpc:
    def __init__(self, model: CarimaModel, tuning: GpcTuning):
        self.model = model
        self.tuning = tuning
        steps = step_response(model, tuning.n2)
        g = np.zeros((tuning.n2 - tuning.n1 + 1, tuning.nu))
        for row, j in enumerate(range(tuning.n1, tuning.n2 + 1)):
            for i in range(tuning.nu):
                if j - i >= 0:
                    g[row, i] = steps[j - i]
        self._g = g
        self._normal = g.T @ g + tuning.lam * np.eye(tuning.nu)
        self.ys: list[float] = []
        self.us: list[float] = []

    def free_response(self) -> np.ndarray:
        """Predicted y(t+1..t+N2) with the control held at u(t-1)."""
        t = len(self.ys) - 1
        held = self.us[-1] if self.us else 0.0
        ys = list(self.ys)
        us = list(self.us) + [held] * (self.tuning.n2 + 1)
        for j in range(1, self.tuning.n2 + 1):
            ys.append(_model_output(self.model, ys, us, t + j))
        return np.array(ys[t + 1 :])

    def tick(self, measured: float, future_refs) -> float:
        self.ys.append(measured)
        f = self.free_response()[self.tuning.n1 - 1 :]
        w = np.asarray(future_refs[self.tuning.n1 - 1 : self.tuning.n2], dtype=float)
        du = np.linalg.solve(self._normal, self._g.T @ (w - f))[0]
        u = (self.us[-1] if self.us else 0.0) + du
        self.us.append(u)
        return u


def reference_window(reference: np.ndarray, t: int, n: int) -> np.ndarray:
    """reference[t+1 .. t+n], holding the last value past the end."""
    idx = np.minimum(np.arange(t + 1, t + n + 1), len(reference) - 1)
    return reference[idx]


def simulate_nominal(model: CarimaModel, controller: Callable[[float, np.ndarray], float], reference: np.ndarray, horizon: int) -> tuple[np.ndarray, np.ndarray]:
    """Closed loop of a controller on the noise-free CARIMA model; returns (y, u)."""
    if model.b[0] != 0.0:
        raise ValueError("closed-loop runs need a strictly proper model (b0 = 0), y(t) is measured before u(t)")
    ys: list[float] = []
    us: list[float] = []
    for t in range(len(reference)):
        ys.append(_model_output(model, ys, us, t))
        us.append(controller(ys[t], reference_window(reference, t, horizon)))
    return np.array(ys), np.array(us)


def simulate_rst_nominal(rst: RstPolynomials, reference: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    history = RstHistory(rst)
    return simulate_nominal(rst.model, lambda y, refs: rst_tick(rst, refs, y, history), reference, rst.horizon)


def simulate_online_nominal(model: CarimaModel, tuning: GpcTuning, reference: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gpc = RecedingHorizonGpc(model, tuning)
    return simulate_nominal(model, gpc.tick, reference, tuning.n2)


def nominal_cost(rst: RstPolynomials, reference: np.ndarray) -> float:
    """Tracking part of the GPC cost, sum of (y - w)^2, on the nominal model."""
    y, _ = simulate_rst_nominal(rst, reference)
    return float(np.sum((y - reference) ** 2))
