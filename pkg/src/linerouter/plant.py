"""Electrical plant around the router.

The grid-emulating source is stiff and common to both houses, so every port
sees the same bus voltage whatever the gate states are. The battery PCS runs at
unity power factor; its real power follows the reference under a slew-rate
limit (optionally through a first-order lag first).

Sign conventions: battery power is positive when charging; port quantities are
positive when power flows into the router.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .errors import ConfigurationError
from .matrix import Partition, peer_in

SQRT2 = math.sqrt(2.0)
SECONDS_PER_HOUR = 3600.0


@dataclass(frozen=True)
class GridSource:
    vrms: float = 200.0
    f_line: float = 60.0
    phase: float = 0.0

    def __post_init__(self):
        if not self.vrms > 0:
            raise ConfigurationError(f"grid vrms must be > 0, got {self.vrms!r}")
        if not self.f_line > 0:
            raise ConfigurationError(f"grid f_line must be > 0, got {self.f_line!r}")

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.f_line


def grid_voltage(g: GridSource, t: float) -> float:
    return SQRT2 * g.vrms * math.sin(g.omega * t + g.phase)


@dataclass(frozen=True)
class BatteryState:
    """Battery + PCS. ``p_ref`` and ``p_act`` in W (positive = charging).

    ``lag_tau`` (s) puts a first-order lag in front of the slew limiter;
    0 disables it.
    """

    p_ref: float = 0.0
    p_act: float = 0.0
    slew: float = 720.0
    capacity_wh: float = 6500.0
    soc: float = 0.5
    lag_tau: float = 0.0

    def __post_init__(self):
        if not self.slew > 0:
            raise ConfigurationError(f"battery slew must be > 0 W/s, got {self.slew!r}")
        if not self.capacity_wh > 0:
            raise ConfigurationError(f"battery capacity must be > 0 Wh, got {self.capacity_wh!r}")
        if not 0.0 <= self.soc <= 1.0:
            raise ConfigurationError(f"battery soc must be in [0, 1], got {self.soc!r}")
        if self.lag_tau < 0:
            raise ConfigurationError(f"lag time constant must be >= 0, got {self.lag_tau!r}")


def battery_step(b: BatteryState, dt: float) -> BatteryState:
    """Advance the PCS by ``dt``: lag, then slew limit, then SoC saturation."""
    if not dt > 0:
        raise ConfigurationError(f"dt must be > 0, got {dt!r}")
    target = b.p_ref
    if b.lag_tau > 0:
        target = b.p_act + (b.p_ref - b.p_act) * -math.expm1(-dt / b.lag_tau)
    max_step = b.slew * dt
    delta = target - b.p_act
    if delta > max_step:
        delta = max_step
    elif delta < -max_step:
        delta = -max_step
    p = b.p_act + delta

    energy_wh = b.capacity_wh * SECONDS_PER_HOUR  # capacity in W*s
    soc = b.soc + p * dt / energy_wh
    if soc > 1.0:
        p = (1.0 - b.soc) * energy_wh / dt
        soc = 1.0
    elif soc < 0.0:
        p = -b.soc * energy_wh / dt
        soc = 0.0
    return BatteryState(b.p_ref, p, b.slew, b.capacity_wh, soc, b.lag_tau)


def battery_current(b: BatteryState, g: GridSource, t: float) -> float:
    """Current the PCS draws from the bus (A); in phase with the voltage when charging."""
    return SQRT2 * (b.p_act / g.vrms) * math.sin(g.omega * t + g.phase)


@dataclass(frozen=True)
class HouseNet:
    """Net surplus a house would export toward the router (W). Bookkeeping only."""

    net_injection: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.net_injection):
            raise ConfigurationError("house net injection must be finite")


def port_flows(partition: Partition, houses: Mapping[int, HouseNet], battery: BatteryState,
               g: GridSource, t: float, battery_port: int = 3,
               ports: Iterable[int] = (1, 2, 3, 4)) -> dict[int, tuple[float, float]]:
    """Voltage and inflow current at each port.

    The battery's current flows only if its port is connected to one other
    port; that port carries the equal and opposite current. Houses are not
    sources of their own; the common stiff grid behind them supplies or absorbs
    whatever the battery exchanges, so ``houses`` does not change the circuit.
    """
    v = grid_voltage(g, t)
    flows = {p: (v, 0.0) for p in ports}
    peer = peer_in(partition, battery_port)
    if peer is not None and battery.p_act != 0.0:
        i_batt = battery_current(battery, g, t)
        flows[battery_port] = (v, -i_batt)
        flows[peer] = (v, i_batt)
    return flows


def block_power_residuals(partition: Partition, powers: Mapping[int, float]) -> list[float]:
    """Sum of instantaneous inflow power over each multi-port block."""
    return [sum(powers[p] for p in block) for block in partition if len(block) > 1]
