import logging

import numpy as np

from feeddrive.cascade.derivatives import euler_d1, euler_d2
from feeddrive.core.errors import IdentificationError
from feeddrive.core.trace import Trace
from feeddrive.identification.report import IdentReport, r_squared


logger = logging.getLogger(__name__)

CONSTANCY_R_SQUARED = 0.99


def _slope_through_origin(x: np.ndarray, y: np.ndarray, name: str) -> tuple[float, np.ndarray]:
    sxx = float(x @ x)
    if sxx == 0.0:
        raise IdentificationError(f"degenerate regressor for {name}: the position setpoint has no {'velocity' if name == 'VFFW' else 'acceleration'}")
    k = float(x @ y) / sxx
    return k, k * x - y


def fit_feedforward(psec: Trace, vffws: Trace, tffws: Trace, transmission_si: float) -> tuple[float, float, IdentReport]:
    """VFFW and TFFW by regression without intercept of the recorded feedforward setpoints.

    VFFWS (axis velocity) is regressed on euler_d1(PSEC); TFFWS (motor torque) on
    euler_d2(PSEC) mapped to the motor shaft.
    """
    x = psec["psec"]
    if not (len(x) == len(vffws["vffws"]) == len(tffws["tffws"])) or not (psec.dt == vffws.dt == tffws.dt):
        raise IdentificationError("feedforward traces are not aligned")
    x1 = euler_d1(x, psec.dt)
    x2 = euler_d2(x, psec.dt) / transmission_si
    vffw, res_v = _slope_through_origin(x1, vffws["vffws"], "VFFW")
    tffw, res_t = _slope_through_origin(x2, tffws["tffws"], "TFFW")

    r2_v = r_squared(vffws["vffws"], res_v)
    r2_t = r_squared(tffws["tffws"], res_t)
    warnings = []
    for name, r2 in (("VFFW", r2_v), ("TFFW", r2_t)):
        if r2 < CONSTANCY_R_SQUARED:
            warnings.append(f"{name} does not look constant (R^2 = {r2:.4f})")
            logger.warning(warnings[-1])

    report = IdentReport(
        stage="feedforward",
        parameters={"vffw": vffw, "tffw": tffw, "r_squared_vffw": r2_v, "r_squared_tffw": r2_t},
        rms=float(np.sqrt(np.mean(res_v**2))),
        r_squared=min(r2_v, r2_t),
        n_samples=len(x),
        warnings=warnings,
    )
    return vffw, tffw, report
