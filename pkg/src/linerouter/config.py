"""Scenario configuration files (TOML).

Sections: ``simulation``, ``grid``, ``battery``, ``houses``, ``sense``,
``ctrl``, ``topology`` (+ ``topology.bridges``), ``modes.<name>``,
``summary``, ``figures`` and an ``[[events]]`` array. Every section is
optional; missing keys fall back to the built-in defaults. See
``data/default.toml`` for a fully spelled-out example.
"""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .ctrl import GateLookupTable
from .errors import ConfigurationError
from .matrix import SwitchTopology, default_topology
from .plant import BatteryState, GridSource, HouseNet
from .scenario import Event, FigureWindows, Scenario

KNOWN = {
    "simulation": {"duration", "fs", "initial_mode", "ports", "decimate"},
    "grid": {"vrms", "f_line", "phase"},
    "battery": {"port", "p_init", "p_ref", "slew", "capacity_wh", "soc0", "lag_tau"},
    "sense": {"window_periods", "epsilon"},
    "ctrl": {"dead_time"},
    "topology": {"voltage_limit", "current_limit", "bridges"},
    "summary": {"pre_window", "post_window"},
    "figures": {"steady1", "steady2", "switch_port", "switch_voltage"},
}
EVENT_KEYS = {"t", "kind", "p_ref", "target", "watch_port", "port", "net_injection"}


def default_config_path() -> Path:
    return Path(str(resources.files("linerouter") / "data" / "default.toml"))


class _Reader:
    """Pulls typed values out of nested dicts, collecting errors by field path."""

    def __init__(self):
        self.problems: list[str] = []

    def num(self, sec: dict, path: str, key: str, default, kind=float):
        if key not in sec:
            return default
        val = sec[key]
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            self.problems.append(f"{path}.{key}: expected a number, got {val!r}")
            return default
        if kind is int and int(val) != val:
            self.problems.append(f"{path}.{key}: expected an integer, got {val!r}")
            return default
        return kind(val)

    def pair(self, sec: dict, path: str, key: str, default):
        if key not in sec:
            return default
        val = sec[key]
        if (not isinstance(val, list) or len(val) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)):
            self.problems.append(f"{path}.{key}: expected [number, number], got {val!r}")
            return default
        return float(val[0]), float(val[1])

    def section(self, data: dict, name: str) -> dict:
        sec = data.get(name, {})
        if not isinstance(sec, dict):
            self.problems.append(f"{name}: expected a table")
            return {}
        if name in KNOWN:
            for key in sorted(set(sec) - KNOWN[name]):
                self.problems.append(f"{name}.{key}: unknown key")
        return sec


def _build(data: dict) -> tuple[Scenario | None, list[str]]:
    r = _Reader()
    for key in sorted(set(data) - set(KNOWN) - {"houses", "modes", "events"}):
        r.problems.append(f"{key}: unknown section")

    sim = r.section(data, "simulation")
    grid_s = r.section(data, "grid")
    bat = r.section(data, "battery")
    sense = r.section(data, "sense")
    ctrl = r.section(data, "ctrl")
    topo_s = r.section(data, "topology")
    summ = r.section(data, "summary")
    figs = r.section(data, "figures")

    kw: dict = {}
    kw["duration"] = r.num(sim, "simulation", "duration", 4.0)
    kw["fs"] = r.num(sim, "simulation", "fs", 12000.0)
    kw["initial_mode"] = str(sim.get("initial_mode", "Mode1"))
    kw["decimate"] = r.num(sim, "simulation", "decimate", 1, int)
    ports = sim.get("ports", [1, 2, 3])
    if not isinstance(ports, list) or not all(isinstance(p, int) for p in ports):
        r.problems.append(f"simulation.ports: expected a list of port numbers, got {ports!r}")
        ports = [1, 2, 3]
    kw["trace_ports"] = tuple(ports)

    try:
        kw["grid"] = GridSource(
            vrms=r.num(grid_s, "grid", "vrms", 200.0),
            f_line=r.num(grid_s, "grid", "f_line", 60.0),
            phase=r.num(grid_s, "grid", "phase", 0.0),
        )
    except ConfigurationError as e:
        r.problems.append(f"grid: {e}")

    p_init = r.num(bat, "battery", "p_init", 0.0)
    try:
        kw["battery"] = BatteryState(
            p_ref=r.num(bat, "battery", "p_ref", p_init),
            p_act=p_init,
            slew=r.num(bat, "battery", "slew", 720.0),
            capacity_wh=r.num(bat, "battery", "capacity_wh", 6500.0),
            soc=r.num(bat, "battery", "soc0", 0.5),
            lag_tau=r.num(bat, "battery", "lag_tau", 0.0),
        )
    except ConfigurationError as e:
        r.problems.append(f"battery: {e}")
    kw["battery_port"] = r.num(bat, "battery", "port", 3, int)

    houses = {}
    for key, val in r.section(data, "houses").items():
        try:
            port = int(key)
        except ValueError:
            r.problems.append(f"houses.{key}: keys must be port numbers")
            continue
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            r.problems.append(f"houses.{key}: expected a number, got {val!r}")
            continue
        houses[port] = HouseNet(float(val))
    kw["houses"] = houses

    kw["window_periods"] = r.num(sense, "sense", "window_periods", 1, int)
    kw["epsilon"] = r.num(sense, "sense", "epsilon", 5.0)
    kw["dead_time"] = r.num(ctrl, "ctrl", "dead_time", 1, int)

    topology = default_topology()
    if "bridges" in topo_s or "voltage_limit" in topo_s or "current_limit" in topo_s:
        bridges = topo_s.get("bridges", dict(topology.bridges))
        try:
            topology = SwitchTopology(
                {k: tuple(v) for k, v in bridges.items()},
                voltage_limit=r.num(topo_s, "topology", "voltage_limit", 650.0),
                current_limit=r.num(topo_s, "topology", "current_limit", 20.0),
            )
        except (ConfigurationError, TypeError, AttributeError) as e:
            r.problems.append(f"topology.bridges: {e}")
    kw["topology"] = topology

    modes = data.get("modes")
    if modes is not None:
        entries, labels = {}, {}
        for name, m in modes.items():
            if not isinstance(m, dict) or not isinstance(m.get("gates"), dict):
                r.problems.append(f"modes.{name}.gates: expected a table of switch = bool")
                continue
            bad = [k for k, v in m["gates"].items() if not isinstance(v, bool)]
            if bad:
                r.problems.append(f"modes.{name}.gates: non-boolean state for {bad}")
                continue
            entries[name] = m["gates"]
            labels[name] = str(m.get("label", ""))
        try:
            kw["table"] = GateLookupTable(entries, topology, labels)
        except ConfigurationError as e:
            r.problems.append(f"modes: {e}")

    events = []
    raw_events = data.get("events", [])
    if not isinstance(raw_events, list):
        r.problems.append("events: expected an array of tables")
        raw_events = []
    for k, ev in enumerate(raw_events):
        path = f"events[{k}]"
        if not isinstance(ev, dict):
            r.problems.append(f"{path}: expected a table")
            continue
        for key in sorted(set(ev) - EVENT_KEYS):
            r.problems.append(f"{path}.{key}: unknown key")
        if "t" not in ev or "kind" not in ev:
            r.problems.append(f"{path}: 't' and 'kind' are required")
            continue
        events.append(Event(
            t=r.num(ev, path, "t", 0.0),
            kind=str(ev["kind"]),
            p_ref=r.num(ev, path, "p_ref", None),
            target=ev.get("target"),
            watch_port=r.num(ev, path, "watch_port", None, int),
            port=r.num(ev, path, "port", None, int),
            net_injection=r.num(ev, path, "net_injection", None),
        ))
    kw["events"] = tuple(events)

    kw["pre_window"] = r.pair(summ, "summary", "pre_window", (0.5, 1.0))
    kw["post_window"] = r.pair(summ, "summary", "post_window", (3.5, 4.0))
    fw = FigureWindows()
    kw["figures"] = FigureWindows(
        steady1=r.pair(figs, "figures", "steady1", fw.steady1),
        steady2=r.pair(figs, "figures", "steady2", fw.steady2),
        switch_port=r.pair(figs, "figures", "switch_port", fw.switch_port),
        switch_voltage=r.pair(figs, "figures", "switch_voltage", fw.switch_voltage),
    )

    if r.problems:
        return None, r.problems
    try:
        scenario = Scenario(**kw)
    except ConfigurationError as e:
        return None, [str(e)]
    return scenario, scenario.problems()


def check_config(path) -> tuple[Scenario | None, list[str]]:
    """Parse and validate; returns (scenario or None, list of problems)."""
    path = Path(path)
    if not path.is_file():
        return None, [f"{path}: no such config file"]
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        return None, [f"{path}: {e}"]
    return _build(data)


def load_scenario(path) -> Scenario:
    scenario, problems = check_config(path)
    if problems:
        raise ConfigurationError("invalid config:\n  " + "\n  ".join(problems))
    return scenario
