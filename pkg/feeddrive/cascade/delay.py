from collections import deque


def delay_steps(delay: float, dt: float) -> int:
    """Number of plant steps in a delay; the delay must be an exact multiple of dt."""
    n = round(delay / dt)
    if n < 0 or abs(delay / dt - n) > 1e-6:
        raise ValueError(f"delay {delay} s is not a non-negative multiple of the plant step {dt} s")
    return n


class DelayLine:
    """Pure transport delay of n samples, pre-filled with an initial value."""

    def __init__(self, n: int, initial: float = 0.0):
        self.n = n
        self._buffer: deque[float] = deque([initial] * n, maxlen=n) if n > 0 else deque()

    def push(self, value: float) -> float:
        if self.n == 0:
            return value
        out = self._buffer[0]
        self._buffer.append(value)
        return out

    def __len__(self) -> int:
        return self.n
