"""Router switching controller.

A mode command does not change the gates by itself. It arms zero detection on
one watched port; the new gate states from the lookup table are applied at the
first sample where that port's averaged power is (almost) zero. Gates are
changed break-before-make, so no switch closes before every switch that has to
open is open.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass, replace

from .errors import BusyError, CommandError, ConfigurationError, WiringError
from .matrix import GateStates, SwitchTopology, check_port, connectivity, default_topology
from .sense import ZeroDetector, zero_detect


class Phase(enum.Enum):
    STEADY = "steady"
    ARMED = "armed"
    SWITCHING = "switching"  # holding an intermediate break-before-make state


@dataclass(frozen=True)
class RouterMode:
    id: str
    label: str = ""


class GateLookupTable(Mapping):
    """Mode name -> GateStates, every entry covering the full topology."""

    def __init__(self, entries: Mapping[str, Mapping[str, bool]], topology: SwitchTopology,
                 labels: Mapping[str, str] | None = None):
        if not entries:
            raise ConfigurationError("lookup table is empty")
        self.topology = topology
        self.entries = {str(m): GateStates(g).validate(topology) for m, g in entries.items()}
        labels = labels or {}
        self.modes = {m: RouterMode(m, labels.get(m, "")) for m in self.entries}

    def __getitem__(self, mode: str) -> GateStates:
        try:
            return self.entries[mode]
        except KeyError:
            raise CommandError(f"mode {mode!r} is not in the lookup table") from None

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def mode_of(self, gates: GateStates) -> str | None:
        for m, g in self.entries.items():
            if g == gates:
                return m
        return None

    def max_block_size(self) -> dict[str, int]:
        return {
            m: max(len(b) for b in connectivity(self.topology, g))
            for m, g in self.entries.items()
        }


def default_table(topology: SwitchTopology | None = None) -> GateLookupTable:
    """Mode1: house 1 <-> battery; Mode2: house 2 <-> battery."""
    topology = topology or default_topology()
    return GateLookupTable(
        {
            "Mode1": {"SW1A": True, "SW2A": False},
            "Mode2": {"SW1A": False, "SW2A": True},
        },
        topology,
        labels={"Mode1": "house 1 -> battery", "Mode2": "battery -> house 2"},
    )


def gate_sequence(old: GateStates, new: GateStates, dead_time: int = 1) -> list[tuple[GateStates, int | None]]:
    """Break-before-make steps from ``old`` to ``new``.

    Each entry is ``(gates, hold)`` with ``hold`` in samples; the final entry
    has hold None (held until the next command).
    """
    if set(old) != set(new):
        raise ConfigurationError("old and new gate states cover different switches")
    if old == new:
        raise ConfigurationError("gate sequence requested with old == new")
    if int(dead_time) != dead_time or dead_time < 0:
        raise ConfigurationError(f"dead_time must be a non-negative integer, got {dead_time!r}")
    turn_off = [k for k in old if old[k] and not new[k]]
    turn_on = [k for k in old if new[k] and not old[k]]
    if turn_off and turn_on and dead_time > 0:
        opened = GateStates({k: (old[k] and k not in turn_off) for k in old})
        return [(opened, int(dead_time)), (new, None)]
    return [(new, None)]


@dataclass(frozen=True)
class ControllerState:
    current: str
    pending: str | None = None
    watch_port: int | None = None
    phase: Phase = Phase.STEADY
    epsilon: float = 5.0
    dead_time: int = 1
    # remaining break-before-make steps and samples left on the held one
    queue: tuple = ()
    hold: int = 0

    def __post_init__(self):
        if (self.pending is None) != (self.watch_port is None):
            raise WiringError("watch_port must be set exactly when a command is pending")
        ZeroDetector(self.epsilon)

    @property
    def detector(self) -> ZeroDetector:
        return ZeroDetector(self.epsilon, armed=self.phase is Phase.ARMED)


def issue_mode_command(cs: ControllerState, target: str, watch: int,
                       table: GateLookupTable | None = None) -> ControllerState:
    if cs.phase is not Phase.STEADY:
        raise BusyError(f"command {target!r} rejected: controller is {cs.phase.value}"
                        + (f" with {cs.pending!r} pending" if cs.pending else ""))
    if target == cs.current:
        raise CommandError(f"router is already in {target!r}")
    if table is not None:
        table[target]
    check_port(watch)
    return replace(cs, pending=target, watch_port=watch, phase=Phase.ARMED)


def controller_step(cs: ControllerState, averages: Mapping[int, float | None],
                    table: GateLookupTable) -> tuple[ControllerState, GateStates | None]:
    """Advance one sample. Returns the new state and the gates to apply, or None."""
    if cs.phase is Phase.SWITCHING:
        hold = cs.hold - 1
        if hold > 0:
            return replace(cs, hold=hold), None
        (gates, nxt), rest = cs.queue[0], cs.queue[1:]
        if nxt is None:
            return replace(cs, phase=Phase.STEADY, queue=(), hold=0), gates
        return replace(cs, queue=rest, hold=nxt), gates

    if cs.phase is not Phase.ARMED:
        return cs, None
    if cs.watch_port not in averages:
        raise WiringError(f"no averaged power supplied for watched port {cs.watch_port}")
    if not zero_detect(cs.detector, averages[cs.watch_port]):
        return cs, None

    steps = gate_sequence(table[cs.current], table[cs.pending], cs.dead_time)
    (first, hold), rest = steps[0], tuple(steps[1:])
    done = replace(cs, current=cs.pending, pending=None, watch_port=None)
    if hold is None:
        return replace(done, phase=Phase.STEADY), first
    return replace(done, phase=Phase.SWITCHING, queue=rest, hold=hold), first
