"""
Integer-period power averaging
==============================

A one-cycle window cancels the double-frequency ripple in v*i, leaving
Vrms * Irms * cos(phi).
"""

# %%
import math

import numpy as np

from linerouter.sense import PowerAverager, ZeroDetector

fs, f_line = 12000.0, 60.0
avg = PowerAverager.for_line(fs, f_line)
print("window length:", avg.n, "samples")

# %% 200 V, 5 A, current lagging by 30 degrees
k = np.arange(3 * avg.n)
wt = 2 * np.pi * f_line * k / fs
p = (math.sqrt(2) * 200 * np.sin(wt)) * (math.sqrt(2) * 5 * np.sin(wt - math.pi / 6))
out = [avg.update(float(x)) for x in p]
print("first ready sample:", next(j for j, x in enumerate(out) if x is not None))
print("average:", out[-1], " expected:", 200 * 5 * math.cos(math.pi / 6))
print("instantaneous swing:", p.min(), "to", p.max())

# %% The zero detector only fires once armed, and only strictly inside epsilon.
det = ZeroDetector(epsilon=5.0)
print("disarmed, 3 W:", det(3.0))
det.armed = True
print("armed:", {x: det(x) for x in (12.0, 5.0, -4.9, None)})
