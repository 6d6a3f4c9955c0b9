"""
Driving runs from a TOML file
=============================

The bundled config reproduces the default transfer. Edit a copy to try
other slew rates or thresholds, then run it from Python or the command line.
"""

# %%
import pathlib
import subprocess
import sys
import tempfile

from linerouter.config import check_config, default_config_path

print(default_config_path().read_text()[:400], "...", flush=True)

# %% A faster battery ramp moves the switch earlier.
work = pathlib.Path(tempfile.mkdtemp())
cfg = work / "fast.toml"
cfg.write_text(default_config_path().read_text().replace("slew = 720.0", "slew = 1400.0"))
scenario, problems = check_config(cfg)
print("problems:", problems, flush=True)

# %% Same thing through the command line
subprocess.run([sys.executable, "-m", "linerouter", "run", "--config", str(cfg),
                "--out", str(work / "out"), "--decimate", "10"], check=True)
subprocess.run([sys.executable, "-m", "linerouter", "figures", "--out", str(work / "out")], check=True)
print(sorted(p.name for p in (work / "out" / "figures").iterdir()))
