"""Waveform-level simulator of a line-switching bidirectional power router."""

from .ctrl import (
    ControllerState,
    GateLookupTable,
    Phase,
    RouterMode,
    controller_step,
    default_table,
    gate_sequence,
    issue_mode_command,
)
from .engine import RunResult, SwitchEvent, run_scenario
from .errors import (
    BusyError,
    CommandError,
    ConfigurationError,
    MultiConnectionError,
    RouterError,
    WiringError,
)
from .ledger import EnergyLedger, ledger_update
from .matrix import (
    GateStates,
    SwitchTopology,
    connected_peer,
    connectivity,
    default_topology,
    extended_topology,
    set_gate,
)
from .plant import (
    BatteryState,
    GridSource,
    HouseNet,
    battery_current,
    battery_step,
    grid_voltage,
    port_flows,
)
from .scenario import Event, Scenario, default_scenario
from .sense import PortSample, PowerAverager, ZeroDetector, inst_power, ma_update, zero_detect
from .summary import summarize
from .trace import Trace, TraceRecord, read_csv

__version__ = "0.1.0"
