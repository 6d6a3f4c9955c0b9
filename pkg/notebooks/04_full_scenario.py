"""
Charging-to-discharging transfer
================================

House 1 charges the battery at 700 W; at t = 1 s the battery is told to
discharge 700 W into house 2. The router swaps lines when the battery
power ramps through zero.
"""

# %%
import time

import numpy as np

from linerouter import default_scenario, run_scenario

t0 = time.perf_counter()
result = run_scenario(default_scenario())
print(f"simulated 4 s in {time.perf_counter() - t0:.2f} s")

summary = result.summary()
print("switch detected at", summary["switch_time"], "s")
print("steady before:", summary["steady_pre"])
print("steady after: ", summary["steady_post"])
print("ledger Wh by source->sink:", summary["ledger_wh"], " soc", summary["soc_start"], "->", summary["soc_end"])

# %% Per-interval energy records
for row in result.ledger.rows():
    print(row)

# %% Gate rows around the switch
tr = result.trace
for k in tr.gate_change_rows():
    print(f"t={tr.t[k]:.6f}  gates={tr.gates[k].tolist()}  pavg3={tr.pavg[k, tr.col(3)]:+.3f} W")

# %% Plot (needs the optional matplotlib extra)
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(2, 1, sharex=True, figsize=(8, 5))
    for port in (1, 2, 3):
        ax[0].plot(tr.t, tr.pavg[:, tr.col(port)], label=f"port {port}")
    ax[0].set_ylabel("averaged power [W]")
    ax[0].legend()
    sel = np.abs(tr.t - summary["switch_time"]) < 0.05
    ax[1].plot(tr.t[sel], tr.i[sel, tr.col(3)])
    ax[1].set_ylabel("port 3 current [A]")
    ax[1].set_xlabel("t [s]")
    fig.savefig("full_scenario.png", dpi=120)
    print("wrote full_scenario.png")
