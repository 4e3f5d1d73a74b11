import numpy as np


def euler_d1(x, tps: float) -> np.ndarray:
    """Backward-difference derivative, (1 - z^-1) / tps, with x(-1) = x(0)."""
    if tps <= 0.0:
        raise ValueError(f"sampling period must be positive, got {tps}")
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return x.copy()
    return np.diff(x, prepend=x[0]) / tps


def euler_d2(x, tps: float) -> np.ndarray:
    """Second backward difference, (1 - 2 z^-1 + z^-2) / tps^2, with x(-2) = x(-1) = x(0)."""
    if tps <= 0.0:
        raise ValueError(f"sampling period must be positive, got {tps}")
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return x.copy()
    first = np.diff(x, prepend=x[0])
    return np.diff(first, prepend=first[0]) / (tps * tps)
