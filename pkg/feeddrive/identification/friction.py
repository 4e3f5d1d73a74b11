"""Friction law identification from constant-velocity plateaus.

At zero acceleration the motor current equals the friction current (plus the
static load). Data are folded onto v > 0 using the odd symmetry of the law.
"""

import logging

import numpy as np
from scipy import optimize

from feeddrive.cascade.derivatives import euler_d1
from feeddrive.core.errors import IdentificationError
from feeddrive.core.parameters import AxisParameters, FrictionParams
from feeddrive.core.trace import Trace
from feeddrive.identification.report import IdentReport, r_squared


logger = logging.getLogger(__name__)

MIN_DISTINCT_VELOCITIES = 8
B_GRID = np.linspace(-0.5, 0.5, 101)
D_GRID = np.linspace(-2.0, 0.5, 101)
PLATEAU_TOLERANCE = 0.01  # relative velocity spread inside one plateau


def _distinct(v: np.ndarray) -> int:
    return len(np.unique(np.round(np.abs(v), 6)))


def _linear_amplitudes(v: np.ndarray, i: np.ndarray, exponents: tuple[float, ...]) -> tuple[np.ndarray, float]:
    basis = np.column_stack([np.exp(e * v) for e in exponents])
    coef, *_ = np.linalg.lstsq(basis, i, rcond=None)
    res = basis @ coef - i
    return coef, float(res @ res)


def _single_exponential(v: np.ndarray, i: np.ndarray) -> tuple[np.ndarray, float]:
    best = (np.zeros(2), np.inf)
    for b in B_GRID:
        (a,), rss = _linear_amplitudes(v, i, (b,))
        if rss < best[1]:
            best = (np.array([a, b]), rss)
    sol = optimize.least_squares(lambda x: x[0] * np.exp(x[1] * v) - i, best[0], xtol=1e-14, ftol=1e-14, gtol=1e-14)
    rss = float(sol.fun @ sol.fun)
    return (sol.x, rss) if rss < best[1] else best


def _double_exponential(v: np.ndarray, i: np.ndarray) -> tuple[np.ndarray, float]:
    best = (np.zeros(4), np.inf)
    for b in B_GRID:
        for d in D_GRID:
            if d >= b:
                continue
            (a, c), rss = _linear_amplitudes(v, i, (b, d))
            if rss < best[1]:
                best = (np.array([a, b, c, d]), rss)
    if not np.isfinite(best[1]):
        raise IdentificationError("friction grid search found no admissible exponents")

    def residual(x: np.ndarray) -> np.ndarray:
        return x[0] * np.exp(x[1] * v) + x[2] * np.exp(x[3] * v) - i

    sol = optimize.least_squares(residual, best[0], xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=20000)
    rss = float(sol.fun @ sol.fun)
    if not np.all(np.isfinite(sol.x)):
        raise IdentificationError("friction fit diverged", best_residual=best[1])
    return (sol.x, rss) if rss <= best[1] else best


def fit_friction(points: list[tuple[float, float]] | np.ndarray, v_fit_max: float | None = None) -> tuple[FrictionParams, IdentReport]:
    """Fit i = a e^(b v) + c e^(d v) on (velocity, current) points; i0 is tied to a + c."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    v, i = pts[:, 0], pts[:, 1]
    keep = v != 0.0
    v, i = v[keep], i[keep]
    if _distinct(v) < MIN_DISTINCT_VELOCITIES:
        raise IdentificationError(f"insufficient velocity span: {_distinct(v)} distinct |v| values, need {MIN_DISTINCT_VELOCITIES}")

    v_fold = np.abs(v)
    i_fold = np.sign(v) * i

    warnings: list[str] = []
    x, rss = _double_exponential(v_fold, i_fold)
    single, rss_single = _single_exponential(v_fold, i_fold)
    if rss_single <= rss + 1e-9 * float(i_fold @ i_fold):
        msg = "friction data are explained by a single exponential; second branch set to zero"
        logger.warning(msg)
        warnings.append(msg)
        x, rss = np.array([single[0], single[1], 0.0, 0.0]), rss_single

    a, b, c, d = (float(p) for p in x)
    fitted = a * np.exp(b * v_fold) + c * np.exp(d * v_fold)
    r2 = r_squared(i_fold, fitted - i_fold)
    fp = FrictionParams(
        a=a,
        b=b,
        c=c,
        d=d,
        i0=a + c,
        v_fit_max=v_fit_max if v_fit_max is not None else float(v_fold.max()),
        r_squared=r2,
        n_points=len(v_fold),
    )
    report = IdentReport(
        stage="friction",
        parameters={"a": a, "b": b, "c": c, "d": d, "i0": a + c},
        rms=float(np.sqrt(rss / len(v_fold))),
        r_squared=r2,
        n_samples=len(v_fold),
        warnings=warnings,
    )
    return fp, report


def extract_friction_points(
    traces: list[Trace],
    p: AxisParameters,
    accel_tolerance: float = 1e-3,
    current_tolerance: float = 1e-2,
    min_feed: float = 1e-2,
    min_samples: int = 5,
) -> tuple[list[tuple[float, float]], IdentReport]:
    """Mean (feed, current) per constant-velocity plateau of the given runs.

    Samples whose acceleration (axis SI units per s^2) or current slope (A/s)
    exceed the tolerances are dropped. The static load current is removed.
    """
    kind = p.kind
    load_current = p.static_load / p.k_t
    points: list[tuple[float, float]] = []
    dropped = total = 0
    for tr in traces:
        v_si, cur = tr["sv"], tr["smc"]
        acc = euler_d1(v_si, tr.dt)
        di = euler_d1(cur, tr.dt)
        feed = kind.feed_from_si(v_si)
        moving = np.abs(feed) > min_feed
        steady = moving & (np.abs(acc) <= accel_tolerance) & (np.abs(di) <= current_tolerance)
        total += int(moving.sum())
        dropped += int((moving & ~steady).sum())

        idx = np.nonzero(steady)[0]
        if len(idx) == 0:
            continue
        order = idx[np.argsort(feed[idx])]
        group = [order[0]]
        for k in order[1:]:
            ref = feed[group[0]]
            if abs(feed[k] - ref) <= PLATEAU_TOLERANCE * abs(ref):
                group.append(k)
                continue
            if len(group) >= min_samples:
                points.append((float(np.mean(feed[group])), float(np.mean(cur[group])) - load_current))
            group = [k]
        if len(group) >= min_samples:
            points.append((float(np.mean(feed[group])), float(np.mean(cur[group])) - load_current))

    report = IdentReport(
        stage="friction_points",
        n_samples=total - dropped,
        diagnostics=[f"dropped {dropped} of {total} moving samples with non-zero acceleration", f"{len(points)} plateaus"],
    )
    logger.info("friction extraction: %d plateaus, dropped %d/%d samples", len(points), dropped, total)
    return points, report
