import logging

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, model_validator

from feeddrive.core.errors import SynthesisError
from feeddrive.gpc.carima import DELTA, CarimaModel, Predictor, diophantine_chain, pad


logger = logging.getLogger(__name__)

MAX_CONDITION_NUMBER = 1e12


class GpcTuning(BaseModel):
    """The four GPC knobs: output horizons, control horizon and increment weighting."""

    model_config = ConfigDict(frozen=True)

    n1: int = 1
    n2: int = 30
    nu: int = 30
    lam: float = 100.0

    @model_validator(mode="after")
    def _check(self) -> "GpcTuning":
        if not 1 <= self.n1 <= self.n2:
            raise ValueError(f"horizons must satisfy 1 <= n1 <= n2, got n1={self.n1}, n2={self.n2}")
        if not 1 <= self.nu <= self.n2 - self.n1 + 1:
            raise ValueError(f"control horizon must satisfy 1 <= nu <= n2 - n1 + 1, got nu={self.nu}")
        if self.lam < 0.0:
            raise ValueError("lambda must be non-negative")
        return self

    def sort_key(self) -> tuple[int, int, float, int]:
        return (self.n2, self.nu, self.lam, self.n1)

    def label(self) -> str:
        return f"N1={self.n1} N2={self.n2} Nu={self.nu} lambda={self.lam:g}"


class RstPolynomials(BaseModel):
    """S(z^-1) u(t) = -R(z^-1) y(t) + T(z) w(t).

    r and s are ascending powers of z^-1; t[j] weights the reference j periods ahead.
    The control u is a position increment per period.
    """

    model_config = ConfigDict(frozen=True)

    r: list[float]
    s: list[float]
    t: list[float]
    t_sp: float
    tuning: GpcTuning
    model: CarimaModel
    condition_number: float | None = None

    @property
    def R(self) -> np.ndarray:
        return np.array(self.r)

    @property
    def S(self) -> np.ndarray:
        return np.array(self.s)

    @property
    def T(self) -> np.ndarray:
        return np.array(self.t)

    @property
    def horizon(self) -> int:
        return len(self.t) - 1

    def static_checks(self) -> tuple[float, float]:
        """(S(1), T(1) - R(1)); both vanish for a valid GPC controller."""
        return float(np.sum(self.s)), float(np.sum(self.t) - np.sum(self.r))


def prediction_matrix(chain: list[Predictor], tuning: GpcTuning) -> np.ndarray:
    rows = []
    for pred in chain[tuning.n1 - 1 : tuning.n2]:
        row = np.zeros(tuning.nu)
        for i in range(tuning.nu):
            k = pred.j - i
            if 0 <= k < len(pred.g):
                row[i] = pred.g[k]
        rows.append(row)
    return np.array(rows)


def gpc_gains(chain: list[Predictor], tuning: GpcTuning) -> tuple[np.ndarray, float]:
    """First row of (G'G + lambda I)^-1 G' and the condition number of the normal matrix."""
    g = prediction_matrix(chain, tuning)
    normal = g.T @ g + tuning.lam * np.eye(tuning.nu)
    cond = float(np.linalg.cond(normal))
    if not np.isfinite(cond) or cond > MAX_CONDITION_NUMBER:
        raise SynthesisError("GPC normal equations are singular or ill-conditioned", cond)
    gains = np.linalg.solve(normal, g.T)[0]
    return gains, cond


def synthesize_rst(m: CarimaModel, t: GpcTuning) -> RstPolynomials:
    chain = diophantine_chain(m, t.n2)
    gammas, cond = gpc_gains(chain, t)

    r = np.zeros(1)
    h_sum = np.zeros(1)
    t_poly = np.zeros(t.n2 + 1)
    for gamma, pred in zip(gammas, chain[t.n1 - 1 : t.n2]):
        r = P.polyadd(r, gamma * pred.f)
        if len(pred.h):
            h_sum = P.polyadd(h_sum, gamma * pred.h)
        t_poly[pred.j] = gamma

    s = P.polymul(DELTA, P.polyadd([1.0], np.concatenate([[0.0], h_sum])))
    rst = RstPolynomials(
        r=pad(r, 1).tolist(),
        s=s.tolist(),
        t=t_poly.tolist(),
        t_sp=m.t_sp,
        tuning=t,
        model=m,
        condition_number=cond,
    )
    s1, gain_gap = rst.static_checks()
    if abs(s1) > 1e-9 or abs(gain_gap) > 1e-9 * max(1.0, abs(float(np.sum(rst.r)))):
        raise SynthesisError(f"RST assembly violated S(1) = 0 or T(1) = R(1) (S(1)={s1:.3e}, T(1)-R(1)={gain_gap:.3e})", cond)
    logger.info("synthesized RST for %s (cond %.3e)", t.label(), cond)
    return rst


class StabilityMargins(BaseModel):
    gain_margin_db: float
    phase_margin_deg: float
    gain_crossover: float | None
    phase_crossover: float | None


def stability_margins(rst: RstPolynomials, n_points: int = 8192) -> StabilityMargins:
    """Margins of L(z) = B R / (A S) on the unit circle (nominal model).

    L carries a double integrator, so its phase starts near -180 deg; phase
    crossovers are only searched above the gain crossover.
    """
    m = rst.model
    w = np.linspace(1e-4, np.pi, n_points)
    zinv = np.exp(-1j * w)
    loop = P.polyval(zinv, P.polymul(m.B, rst.R)) / P.polyval(zinv, P.polymul(m.A, rst.S))
    mag = np.abs(loop)
    phase = np.unwrap(np.angle(loop))

    phase_margin_deg = np.inf
    gain_crossover = None
    start = 0
    below = np.nonzero(mag < 1.0)[0]
    if len(below):
        start = int(below[0])
        gain_crossover = float(w[start])
        phase_margin_deg = float(np.degrees(phase[start]) % 360.0 - 180.0)

    gain_margin_db = np.inf
    phase_crossover = None
    shifted = (phase[start:] + np.pi) / (2 * np.pi)
    crossings = np.nonzero(np.diff(np.floor(shifted)) != 0)[0]
    if len(crossings):
        k = start + int(crossings[0]) + 1
        phase_crossover = float(w[k])
        gain_margin_db = float(-20.0 * np.log10(mag[k]))
    return StabilityMargins(
        gain_margin_db=gain_margin_db,
        phase_margin_deg=phase_margin_deg,
        gain_crossover=gain_crossover,
        phase_crossover=phase_crossover,
    )
