"""Per-port sensing: instantaneous power, integer-period moving average, zero detection."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError


@dataclass(frozen=True)
class PortSample:
    t: float
    v: float
    i: float


def inst_power(s: PortSample) -> float:
    """v * i, positive when power flows into the router."""
    return s.v * s.i


def samples_per_period(fs: float, f_line: float) -> int:
    """Integer number of samples in one line period; raise if fs is not a multiple."""
    if fs <= 0 or f_line <= 0:
        raise ConfigurationError("fs and f_line must be positive")
    ratio = fs / f_line
    n = round(ratio)
    if n < 1 or abs(ratio - n) > 1e-9 * ratio:
        raise ConfigurationError(
            f"fs={fs:g} Hz is not an integer multiple of f_line={f_line:g} Hz"
        )
    return n


def window_length(fs: float, f_line: float, periods: int = 1) -> int:
    if int(periods) != periods or periods < 1:
        raise ConfigurationError(f"window must span a positive integer number of periods, got {periods!r}")
    return int(periods) * samples_per_period(fs, f_line)


class PowerAverager:
    """Simple moving average over the last ``n`` power samples.

    The ring buffer keeps a compensated running sum (Neumaier) that is
    rebuilt exactly from the buffer once per revolution, so rounding error
    stays at the last-bit level and cannot accumulate over long runs.
    ``update`` returns None until the buffer has been filled once.
    """

    __slots__ = ("n", "buf", "pos", "count", "total", "comp", "_since_resum")

    def __init__(self, n: int):
        if int(n) != n or n < 1:
            raise ConfigurationError(f"window length must be a positive integer, got {n!r}")
        self.n = int(n)
        self.buf = [0.0] * self.n
        self.pos = 0
        self.count = 0
        self.total = 0.0
        self.comp = 0.0
        self._since_resum = 0

    @classmethod
    def for_line(cls, fs: float, f_line: float, periods: int = 1) -> PowerAverager:
        return cls(window_length(fs, f_line, periods))

    @property
    def ready(self) -> bool:
        return self.count >= self.n

    def update(self, p: float) -> float | None:
        buf = self.buf
        pos = self.pos
        total = self.total
        comp = self.comp
        t = total + p
        comp += (total - t) + p if abs(total) >= abs(p) else (p - t) + total
        total = t
        x = -buf[pos]
        t = total + x
        comp += (total - t) + x if abs(total) >= abs(x) else (x - t) + total
        total = t
        buf[pos] = p
        pos += 1
        if pos == self.n:
            pos = 0
        self.pos = pos
        self._since_resum += 1
        if self._since_resum >= self.n:
            total = math.fsum(buf)
            comp = 0.0
            self._since_resum = 0
        self.total = total
        self.comp = comp
        if self.count < self.n:
            self.count += 1
            if self.count < self.n:
                return None
        return (total + comp) / self.n

    @property
    def average(self) -> float | None:
        return (self.total + self.comp) / self.n if self.ready else None

    def window(self) -> list[float]:
        """Buffered samples, oldest first."""
        if not self.ready:
            return self.buf[: self.count]
        return self.buf[self.pos:] + self.buf[: self.pos]


def ma_update(a: PowerAverager, p: float) -> tuple[PowerAverager, float | None]:
    return a, a.update(p)


@dataclass
class ZeroDetector:
    epsilon: float = 5.0
    armed: bool = False

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ConfigurationError(f"epsilon must be > 0, got {self.epsilon!r}")

    def __call__(self, average: float | None) -> bool:
        return zero_detect(self, average)


def zero_detect(d: ZeroDetector, average: float | None) -> bool:
    # An unfilled window never counts as zero power.
    if average is None or not d.armed:
        return False
    return abs(average) < d.epsilon
