from .controller import (
    ActuatorLimits,
    CascadeController,
    CascadeState,
    FeedforwardFlags,
    position_tick,
)
from .delay import DelayLine, delay_steps
from .derivatives import euler_d1, euler_d2


__all__ = [
    "ActuatorLimits",
    "CascadeController",
    "CascadeState",
    "DelayLine",
    "FeedforwardFlags",
    "delay_steps",
    "euler_d1",
    "euler_d2",
    "position_tick",
]
