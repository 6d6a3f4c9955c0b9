"""
Mode commands and break-before-make
===================================

A command arms the detector; the gates move only once the watched port's
averaged power is near zero.
"""

# %%
from linerouter import ControllerState, controller_step, default_table, issue_mode_command
from linerouter.errors import BusyError

table = default_table()
cs = issue_mode_command(ControllerState("Mode1", dead_time=1), "Mode2", 3, table)
print(cs.phase, "watching port", cs.watch_port)

# %% Feed a ramp of averaged battery-port power through zero.
for p in (-400.0, -120.0, -30.0, -4.0, 6.0, 40.0):
    cs, gates = controller_step(cs, {3: p}, table)
    print(f"{p:+8.1f} W  phase={cs.phase.name:9s} gates={gates}")

# %% While a switch is in flight further commands are refused.
cs = issue_mode_command(ControllerState("Mode1", dead_time=1), "Mode2", 3, table)
cs, _ = controller_step(cs, {3: 0.0}, table)
try:
    issue_mode_command(cs, "Mode1", 3, table)
except BusyError as err:
    print("refused:", err)
