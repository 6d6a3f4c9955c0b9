"""Scenario description, defaults and validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ctrl import GateLookupTable, default_table
from .errors import ConfigurationError
from .matrix import PORTS, SwitchTopology, default_topology
from .plant import BatteryState, GridSource, HouseNet
from .sense import samples_per_period

EVENT_KINDS = ("battery_ref", "mode_command", "house_net")


@dataclass(frozen=True)
class Event:
    """A scheduled change. Which optional fields matter depends on ``kind``:

    battery_ref   p_ref
    mode_command  target, watch_port
    house_net     port, net_injection
    """

    t: float
    kind: str
    p_ref: float | None = None
    target: str | None = None
    watch_port: int | None = None
    port: int | None = None
    net_injection: float | None = None


@dataclass(frozen=True)
class FigureWindows:
    """Zoom windows for figure slices (s). Switch zooms are relative to the switch time."""

    steady1: tuple[float, float] = (0.5, 0.55)
    steady2: tuple[float, float] = (3.5, 3.55)
    switch_port: tuple[float, float] = (-0.05, 0.05)
    switch_voltage: tuple[float, float] = (-0.025, 0.025)


@dataclass
class Scenario:
    duration: float = 4.0
    fs: float = 12000.0
    initial_mode: str = "Mode1"
    grid: GridSource = field(default_factory=GridSource)
    battery: BatteryState = field(default_factory=BatteryState)
    battery_port: int = 3
    houses: dict[int, HouseNet] = field(default_factory=dict)
    topology: SwitchTopology = field(default_factory=default_topology)
    table: GateLookupTable | None = None
    window_periods: int = 1
    epsilon: float = 5.0
    dead_time: int = 1
    events: tuple[Event, ...] = ()
    trace_ports: tuple[int, ...] = (1, 2, 3)
    decimate: int = 1
    pre_window: tuple[float, float] = (0.5, 1.0)
    post_window: tuple[float, float] = (3.5, 4.0)
    figures: FigureWindows = field(default_factory=FigureWindows)

    def __post_init__(self):
        if self.table is None:
            self.table = default_table(self.topology)

    @property
    def dt(self) -> float:
        return 1.0 / self.fs

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.fs))

    def event_sample(self, ev: Event) -> int:
        # first sample at or after the event time
        return max(0, math.ceil(ev.t * self.fs - 1e-6))

    def problems(self) -> list[str]:
        """Cross-field checks; each message starts with the offending field path."""
        out = []
        if not self.duration > 0:
            out.append(f"simulation.duration: must be > 0, got {self.duration!r}")
        try:
            samples_per_period(self.fs, self.grid.f_line)
        except ConfigurationError as e:
            out.append(f"simulation.fs: {e}")
        if int(self.window_periods) != self.window_periods or self.window_periods < 1:
            out.append(f"sense.window_periods: must be an integer >= 1, got {self.window_periods!r}")
        if not self.epsilon > 0:
            out.append(f"sense.epsilon: must be > 0, got {self.epsilon!r}")
        if int(self.dead_time) != self.dead_time or self.dead_time < 0:
            out.append(f"ctrl.dead_time: must be an integer >= 0, got {self.dead_time!r}")
        if int(self.decimate) != self.decimate or self.decimate < 1:
            out.append(f"simulation.decimate: must be an integer >= 1, got {self.decimate!r}")
        if self.battery_port not in PORTS:
            out.append(f"battery.port: unknown port {self.battery_port!r}")
        for p in self.trace_ports:
            if p not in PORTS:
                out.append(f"simulation.ports: unknown port {p!r}")
        for p in self.houses:
            if p not in PORTS or p == self.battery_port:
                out.append(f"houses.{p}: not a house port")
        if self.initial_mode not in self.table:
            out.append(f"simulation.initial_mode: {self.initial_mode!r} not in modes table")
        for name, win in (("summary.pre_window", self.pre_window),
                          ("summary.post_window", self.post_window)):
            a, b = win
            if not 0 <= a < b <= self.duration:
                out.append(f"{name}: [{a}, {b}] must lie inside [0, duration]")

        last = -math.inf
        for k, ev in enumerate(self.events):
            path = f"events[{k}]"
            if ev.kind not in EVENT_KINDS:
                out.append(f"{path}.kind: unknown kind {ev.kind!r}; expected one of {EVENT_KINDS}")
                continue
            if ev.t < last:
                out.append(f"{path}.t: events must be sorted by time ({ev.t} after {last})")
            last = max(last, ev.t)
            if not 0 <= ev.t <= self.duration:
                out.append(f"{path}.t: {ev.t} outside [0, duration={self.duration}]")
            if ev.kind == "battery_ref" and (ev.p_ref is None or not math.isfinite(ev.p_ref)):
                out.append(f"{path}.p_ref: required finite number for battery_ref")
            if ev.kind == "mode_command":
                if ev.target not in self.table:
                    out.append(f"{path}.target: {ev.target!r} not in modes table")
                if ev.watch_port not in PORTS:
                    out.append(f"{path}.watch_port: unknown port {ev.watch_port!r}")
            if ev.kind == "house_net":
                if ev.port not in self.houses:
                    out.append(f"{path}.port: {ev.port!r} is not a configured house")
                if ev.net_injection is None or not math.isfinite(ev.net_injection):
                    out.append(f"{path}.net_injection: required finite number for house_net")
        return out

    def validate(self) -> Scenario:
        problems = self.problems()
        if problems:
            raise ConfigurationError("invalid scenario:\n  " + "\n  ".join(problems))
        return self


def default_scenario(**overrides) -> Scenario:
    """Three-port charge-to-discharge transition.

    Mode1 with 700 W flowing from house 1 into the battery until t = 1 s; then
    the battery reference steps to 700 W discharging and Mode2 (battery to
    house 2) is commanded with the battery port watched.
    """
    base = dict(
        battery=BatteryState(p_ref=700.0, p_act=700.0, slew=720.0),
        houses={1: HouseNet(700.0), 2: HouseNet(0.0)},
        events=(
            Event(1.0, "battery_ref", p_ref=-700.0),
            Event(1.0, "mode_command", target="Mode2", watch_port=3),
            Event(1.0, "house_net", port=1, net_injection=0.0),
            Event(1.0, "house_net", port=2, net_injection=-700.0),
        ),
    )
    base.update(overrides)
    return Scenario(**base)
