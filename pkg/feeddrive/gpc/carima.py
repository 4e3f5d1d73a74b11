"""CARIMA prediction model and the Diophantine predictor chain.

Polynomials are numpy coefficient arrays in ascending powers of the backward
shift operator z^-1.
"""

import math
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy import linalg, signal


DELTA = np.array([1.0, -1.0])


def trim(c: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Drop trailing coefficients whose magnitude is <= tol (keeps at least one)."""
    c = np.asarray(c, dtype=float)
    n = len(c)
    while n > 1 and abs(c[n - 1]) <= tol:
        n -= 1
    return c[:n]


def pad(c: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(max(n, len(c)))
    out[: len(c)] = c
    return out


class CarimaModel(BaseModel):
    """A(z^-1) y(t) = B(z^-1) u(t) + e(t) / Delta.

    Dead time shows as leading zeros of B. A non-zero b0 is a direct
    feedthrough; sampled position loops always have b0 = 0. fit holds the
    continuous parameters the model was discretized from, when known.
    """

    model_config = ConfigDict(frozen=True)

    a: list[float]
    b: list[float]
    t_sp: float
    fit: dict[str, float] = {}

    @field_validator("a", "b")
    @classmethod
    def _finite(cls, v: list[float]) -> list[float]:
        if not v or not all(math.isfinite(x) for x in v):
            raise ValueError("coefficients must be a non-empty finite sequence")
        return v

    @model_validator(mode="after")
    def _check(self) -> "CarimaModel":
        if abs(self.a[0] - 1.0) > 1e-12:
            raise ValueError(f"A must be monic, got a0 = {self.a[0]}")
        if not any(x != 0.0 for x in self.b):
            raise ValueError("B must not be identically zero")
        if not self.t_sp > 0.0:
            raise ValueError("sampling period must be positive")
        return self

    @property
    def A(self) -> np.ndarray:
        return np.array(self.a)

    @property
    def B(self) -> np.ndarray:
        return np.array(self.b)

    @property
    def deg_a(self) -> int:
        return len(self.a) - 1

    @property
    def deg_b(self) -> int:
        return len(self.b) - 1


class Predictor(NamedTuple):
    """j-step predictor: 1 = E Delta A + z^-j F, E B = G + z^-(j+1) H."""

    j: int
    e: np.ndarray
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray


def diophantine_chain(m: CarimaModel, j_max: int) -> list[Predictor]:
    if j_max < 1:
        raise ValueError("horizon must be at least 1")
    a_tilde = P.polymul(m.A, DELTA)
    n = len(a_tilde) - 1

    e = np.array([1.0])
    f = -a_tilde[1:].copy()
    chain: list[Predictor] = []
    for j in range(1, j_max + 1):
        eb = P.polymul(e, m.B)
        chain.append(Predictor(j=j, e=e, f=f, g=eb[: j + 1].copy(), h=eb[j + 1 :].copy()))
        f0 = f[0]
        e = np.append(e, f0)
        f = (np.append(f, 0.0) - f0 * a_tilde)[1 : n + 1]
    return chain


def identity_residual(m: CarimaModel, pred: Predictor) -> float:
    """Max-norm of 1 - (E Delta A + z^-j F)."""
    a_tilde = P.polymul(m.A, DELTA)
    lhs = P.polyadd(P.polymul(pred.e, a_tilde), np.concatenate([np.zeros(pred.j), pred.f]))
    lhs = pad(lhs, 1)
    lhs[0] -= 1.0
    return float(np.max(np.abs(lhs)))


def lag_integrator_model(tau: float, t_sp: float) -> CarimaModel:
    """Zero-order-hold discretization of 1 / (s (tau s + 1)).

    The input is expressed as a position increment per period (u = v * t_sp),
    so the pure integrator limit is exactly A = 1 - z^-1, B = z^-1.
    """
    if tau <= 0.0:
        return CarimaModel(a=[1.0, -1.0], b=[0.0, 1.0], t_sp=t_sp, fit={"tau": 0.0})
    a = math.exp(-t_sp / tau)
    b0 = t_sp - tau * (1.0 - a)
    b1 = tau * (1.0 - a) - a * t_sp
    return CarimaModel(
        a=[1.0, -(1.0 + a), a],
        b=[0.0, b0 / t_sp, b1 / t_sp],
        t_sp=t_sp,
        fit={"tau": tau},
    )


def _hold_matrices(a: np.ndarray, b: np.ndarray, duration: float) -> tuple[np.ndarray, np.ndarray]:
    """exp(A d) and the integral of exp(A s) B over [0, d], from one augmented exponential."""
    n = a.shape[0]
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = a
    aug[:n, n:] = b
    e = linalg.expm(aug * duration)
    return e[:n, :n], e[:n, n:]


def zoh_integrator_model(num: list[float], den: list[float], t_sp: float, dead_time: float = 0.0, fit: dict[str, float] | None = None) -> CarimaModel:
    """Zero-order-hold discretization of exp(-dead_time s) num(s) / (s den(s)).

    num and den are descending powers of s. The input is a position increment
    per period, as in lag_integrator_model. Whole periods of dead time become
    leading zeros of B; the fractional part splits the held input between the
    current and the previous period.
    """
    whole = int(math.floor(dead_time / t_sp + 1e-9))
    frac = max(dead_time - whole * t_sp, 0.0)
    a_c, b_c, c_c, _ = signal.tf2ss(np.asarray(num, dtype=float) / t_sp, np.polymul(den, [1.0, 0.0]))

    phi, _ = _hold_matrices(a_c, b_c, t_sp)
    late_phi, late = _hold_matrices(a_c, b_c, t_sp - frac)
    _, early = _hold_matrices(a_c, b_c, frac)
    zero = np.zeros((1, 1))
    num_now, den_z = signal.ss2tf(phi, late, c_c, zero)
    num_prev, _ = signal.ss2tf(phi, late_phi @ early, c_c, zero)

    b = np.concatenate([num_now[0], [0.0]]) + np.concatenate([[0.0], num_prev[0]])
    b[0] = 0.0  # strictly proper
    b = np.concatenate([np.zeros(whole), trim(b)])
    params = dict(fit) if fit is not None else {}
    params.setdefault("dead_time", dead_time)
    return CarimaModel(a=(den_z / den_z[0]).tolist(), b=b.tolist(), t_sp=t_sp, fit=params)
