from collections import deque

import numpy as np

from feeddrive.core.errors import ReferenceWindowError
from feeddrive.gpc.synthesis import RstPolynomials


class RstHistory:
    """Past outputs y(t-1), y(t-2), ... and past controls u(t-1), u(t-2), ..."""

    def __init__(self, rst: RstPolynomials, y0: float = 0.0, u0: float = 0.0):
        self.y: deque[float] = deque([y0] * max(len(rst.r) - 1, 0), maxlen=max(len(rst.r) - 1, 0))
        self.u: deque[float] = deque([u0] * max(len(rst.s) - 1, 0), maxlen=max(len(rst.s) - 1, 0))


def rst_tick(rst: RstPolynomials, future_refs, measured_pos: float, history: RstHistory) -> float:
    """Solve S u(t) = -R y(t) + T w(t) for u(t), a position increment per period.

    future_refs[k] is the reference k + 1 periods ahead; at least N2 values are needed.
    """
    n2 = rst.horizon
    if len(future_refs) < n2:
        raise ReferenceWindowError(n2, len(future_refs))
    r, s, t = rst.r, rst.s, rst.t

    acc = -r[0] * measured_pos
    for k, y in enumerate(history.y, start=1):
        acc -= r[k] * y
    for k, u in enumerate(history.u, start=1):
        acc -= s[k] * u
    for j in range(1, n2 + 1):
        if t[j] != 0.0:
            acc += t[j] * future_refs[j - 1]
    u_t = acc / s[0]

    if history.y.maxlen:
        history.y.appendleft(measured_pos)
    if history.u.maxlen:
        history.u.appendleft(u_t)
    return u_t


class RstController:
    """RST position loop producing an axis velocity setpoint (SI) every t_sp."""

    def __init__(self, rst: RstPolynomials, y0: float = 0.0):
        self.rst = rst
        self.history = RstHistory(rst, y0=y0)

    @property
    def horizon(self) -> int:
        return self.rst.horizon

    def tick(self, future_refs: np.ndarray, measured_pos: float) -> float:
        return rst_tick(self.rst, future_refs, measured_pos, self.history) / self.rst.t_sp
