"""Command-line front end.

    linerouter validate --config default.toml
    linerouter run --config default.toml --out out/ [--decimate N]
    linerouter figures --out out/ [--config default.toml]

Exit codes: 0 success, 1 configuration or input error, 2 simulation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import check_config, default_config_path
from .engine import run_scenario
from .errors import ConfigurationError, RouterError
from .scenario import FigureWindows
from .summary import to_jsonable
from .trace import read_csv

EXIT_OK, EXIT_CONFIG, EXIT_SIM = 0, 1, 2

FIGURE_FILES = (
    "full.csv",
    "steady1_zoom.csv",
    "steady2_zoom.csv",
    "switch_port_zoom.csv",
    "switch_voltage_zoom.csv",
)


def _err(msg: str) -> None:
    print(f"linerouter: {msg}", file=sys.stderr)


def cmd_validate(args) -> int:
    _, problems = check_config(args.config)
    if problems:
        for p in problems:
            _err(p)
        return EXIT_CONFIG
    print(f"{args.config}: ok")
    return EXIT_OK


def cmd_run(args) -> int:
    scenario, problems = check_config(args.config)
    if problems:
        for p in problems:
            _err(p)
        return EXIT_CONFIG
    decimate = args.decimate if args.decimate is not None else scenario.decimate
    if decimate < 1:
        _err("--decimate must be >= 1")
        return EXIT_CONFIG
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        result = run_scenario(scenario)
        summary = result.summary()
    except ConfigurationError as e:
        _err(str(e))
        return EXIT_CONFIG
    except RouterError as e:
        _err(f"simulation error: {e}")
        return EXIT_SIM
    result.trace.write_csv(out / "trace.csv", ports=scenario.trace_ports, decimate=decimate)
    result.ledger.write_csv(out / "ledger.csv")
    text = json.dumps(to_jsonable(summary), indent=2)
    (out / "summary.json").write_text(text + "\n")
    print(text)
    return EXIT_OK


def _slice(tr, t0: float, t1: float, name: str) -> list[str]:
    t = tr.t
    if len(t) == 0 or t0 < t[0] - 1e-12 or t1 > t[-1] + 1e-12 or t1 <= t0:
        raise ConfigurationError(
            f"{name} window [{t0:.6f}, {t1:.6f}] outside trace [{t[0]:.6f}, {t[-1]:.6f}]")
    keep = (t >= t0 - 1e-12) & (t <= t1 + 1e-12)
    return [line for line, k in zip(tr.lines, keep) if k]


def cmd_figures(args) -> int:
    out = Path(args.out)
    trace_path = out / "trace.csv"
    if not trace_path.is_file():
        _err(f"{trace_path}: no trace; run `linerouter run` first")
        return EXIT_CONFIG
    windows = FigureWindows()
    if args.config is not None:
        scenario, problems = check_config(args.config)
        if problems:
            for p in problems:
                _err(p)
            return EXIT_CONFIG
        windows = scenario.figures

    try:
        tr = read_csv(trace_path)
    except (ValueError, IndexError) as e:
        _err(f"{trace_path}: unreadable trace ({e})")
        return EXIT_CONFIG
    changes = tr.gate_change_rows()
    slices = {"full.csv": list(tr.lines)}
    try:
        slices["steady1_zoom.csv"] = _slice(tr, *windows.steady1, "steady1")
        slices["steady2_zoom.csv"] = _slice(tr, *windows.steady2, "steady2")
        if len(changes):
            ts = float(tr.t[changes[0]])
            a, b = windows.switch_port
            slices["switch_port_zoom.csv"] = _slice(tr, ts + a, ts + b, "switch_port")
            a, b = windows.switch_voltage
            slices["switch_voltage_zoom.csv"] = _slice(tr, ts + a, ts + b, "switch_voltage")
        else:
            _err("no gate change in trace; switch zooms skipped")
    except ConfigurationError as e:
        _err(str(e))
        return EXIT_CONFIG

    fig_dir = out / "figures"
    fig_dir.mkdir(exist_ok=True)
    head = ",".join(tr.header)
    for name, lines in slices.items():
        (fig_dir / name).write_text("\n".join([head, *lines]) + "\n")
        print(f"{fig_dir / name}: {len(lines)} rows")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linerouter",
        description="Simulate a line-switching power router and export traces.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log controller events")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario config")
    p.add_argument("--config", type=Path, default=default_config_path())
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run a scenario and write trace/ledger/summary")
    p.add_argument("--config", type=Path, default=default_config_path())
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--decimate", type=int, default=None,
                   help="write every N-th sample (default: from config)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("figures", help="cut figure-ready CSV slices from a trace")
    p.add_argument("--out", type=Path, required=True, help="directory holding trace.csv")
    p.add_argument("--config", type=Path, default=None, help="take zoom windows from this config")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
