"""Fixed-step simulation loop: plant -> sense -> controller -> matrix.

Every sample ``k`` (t = k / fs) runs in this order:

1. apply scheduled events whose sample index is ``k``;
2. solve port flows with the gates currently in force;
3. update each port's moving average;
4. step the controller; gates it emits take effect at sample ``k + 1``;
5. update the energy ledger and record the trace row;
6. advance the battery by one step.

The detected switch time is therefore the time of the row whose averaged
power first fell below epsilon, and the new gates show up on the next row.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

from .ctrl import ControllerState, Phase, controller_step, issue_mode_command
from .errors import BusyError, MultiConnectionError
from .ledger import EnergyLedger
from .matrix import PORTS, GateStates, Partition, connectivity
from .plant import HouseNet, battery_step, port_flows
from .scenario import Scenario
from .sense import PowerAverager, window_length
from .trace import Trace

log = logging.getLogger(__name__)


@dataclass
class SwitchEvent:
    t_detect: float
    sample: int
    source_mode: str
    target_mode: str
    watch_port: int
    p_avg: float
    t_gate_change: float = math.nan


@dataclass
class RunResult:
    scenario: Scenario
    trace: Trace
    ledger: EnergyLedger
    switches: list[SwitchEvent] = field(default_factory=list)
    rejected: list[tuple[float, str, str]] = field(default_factory=list)
    soc_start: float = math.nan
    soc_end: float = math.nan

    def summary(self) -> dict:
        from .summary import summarize

        return summarize(self)


def _check_blocks(partition: Partition, gates: GateStates) -> None:
    for block in partition:
        if len(block) > 2:
            raise MultiConnectionError(
                f"gates {gates!r} join ports {sorted(block)} into one circuit"
            )


def run_scenario(s: Scenario) -> RunResult:
    s.validate()
    n = s.n_samples
    dt = s.dt
    fs = s.fs
    grid = s.grid
    table = s.table
    topo = s.topology
    bport = s.battery_port
    ports = PORTS
    switch_names = topo.switches
    mode_names = list(table)

    win = window_length(fs, grid.f_line, s.window_periods)
    averagers = {p: PowerAverager(win) for p in ports}
    ledger = EnergyLedger(ports)

    cs = ControllerState(current=s.initial_mode, epsilon=s.epsilon, dead_time=int(s.dead_time))
    gates = table[s.initial_mode]
    partition = connectivity(topo, gates)
    _check_blocks(partition, gates)

    battery = s.battery
    houses = dict(s.houses)
    house_ports = tuple(sorted(houses))
    trace = Trace.allocate(n, ports, switch_names, mode_names, house_ports)
    events = sorted(((s.event_sample(ev), k, ev) for k, ev in enumerate(s.events)),
                    key=lambda x: (x[0], x[1]))
    next_ev = 0

    result = RunResult(s, trace, ledger, soc_start=battery.soc)
    pending_change: GateStates | None = None
    open_switch: SwitchEvent | None = None

    mode_in_force = s.initial_mode
    mode_idx = {m: j for j, m in enumerate(mode_names)}

    rows_t, rows_v, rows_i, rows_p, rows_avg = [], [], [], [], []
    rows_mode, rows_gates, rows_pact, rows_soc, rows_house = [], [], [], [], []
    gate_row = tuple(int(gates[name]) for name in switch_names)
    nan = math.nan

    for k in range(n):
        t = k * dt

        if pending_change is not None:
            gates = pending_change
            pending_change = None
            partition = connectivity(topo, gates)
            _check_blocks(partition, gates)
            gate_row = tuple(int(gates[name]) for name in switch_names)
            mode_in_force = cs.current
            if open_switch is not None and math.isnan(open_switch.t_gate_change):
                open_switch.t_gate_change = t
            if cs.phase is Phase.STEADY:
                open_switch = None

        while next_ev < len(events) and events[next_ev][0] <= k:
            ev = events[next_ev][2]
            next_ev += 1
            if ev.kind == "battery_ref":
                battery = replace(battery, p_ref=float(ev.p_ref))
            elif ev.kind == "house_net":
                houses[ev.port] = HouseNet(float(ev.net_injection))
            elif ev.kind == "mode_command":
                try:
                    cs = issue_mode_command(cs, ev.target, ev.watch_port, table)
                except BusyError as e:
                    log.warning("t=%.6f: %s", t, e)
                    result.rejected.append((t, ev.target, str(e)))

        flows = port_flows(partition, houses, battery, grid, t, bport, ports)
        vs, is_, ps, avs = [], [], [], []
        avgs = {}
        for p in ports:
            v, i = flows[p]
            pw = v * i
            a = averagers[p].update(pw)
            avgs[p] = a
            vs.append(v)
            is_.append(i)
            ps.append(pw)
            avs.append(nan if a is None else a)

        if cs.phase is not Phase.STEADY:
            before = cs
            cs, new_gates = controller_step(cs, avgs, table)
            if before.phase is Phase.ARMED and cs.phase is not Phase.ARMED:
                open_switch = SwitchEvent(t, k, before.current, before.pending,
                                          before.watch_port, avgs[before.watch_port])
                result.switches.append(open_switch)
                log.info("t=%.6f: zero power at port %d (%.3f W), %s -> %s", t,
                         before.watch_port, avgs[before.watch_port], before.current, before.pending)
            if new_gates is not None:
                pending_change = new_gates

        ledger.update(partition, avgs, dt, t, mode_in_force)

        rows_t.append(t)
        rows_v.append(vs)
        rows_i.append(is_)
        rows_p.append(ps)
        rows_avg.append(avs)
        rows_mode.append(mode_idx[mode_in_force])
        rows_gates.append(gate_row)
        rows_pact.append(battery.p_act)
        rows_soc.append(battery.soc)
        rows_house.append([houses[hp].net_injection for hp in house_ports])

        battery = battery_step(battery, dt)

    if n:
        trace.t[:] = rows_t
        trace.v[:] = rows_v
        trace.i[:] = rows_i
        trace.p[:] = rows_p
        trace.pavg[:] = rows_avg
        trace.mode[:] = rows_mode
        trace.gates[:] = rows_gates
        trace.p_act[:] = rows_pact
        trace.soc[:] = rows_soc
        if house_ports:
            trace.house_net[:] = rows_house
    ledger.close(n * dt)
    result.soc_end = battery.soc
    return result

