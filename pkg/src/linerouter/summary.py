"""Post-run summary computed from the trace alone (plus scenario parameters)."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigurationError
from .matrix import GateStates, connectivity


def steady_powers(trace, window: tuple[float, float]) -> dict[int, float]:
    """Mean averaged power per port over ``window`` = (t0, t1)."""
    t0, t1 = window
    if len(trace) == 0 or t0 < trace.t[0] - 1e-12 or t1 > trace.t[-1] + trace.dt + 1e-12 or t1 <= t0:
        raise ConfigurationError(f"summary window {window} outside trace "
                                 f"[{trace.t[0]:.6f}, {trace.t[-1]:.6f}]")
    sl = trace.window(t0, t1)
    block = trace.pavg[sl]
    if np.isnan(block).any():
        raise ConfigurationError(f"summary window {window} overlaps the averager warm-up")
    return {p: float(block[:, j].mean()) for j, p in enumerate(trace.ports)}


def ideal_voltage(grid, t: np.ndarray) -> np.ndarray:
    return np.sqrt(2.0) * grid.vrms * np.sin(2.0 * np.pi * grid.f_line * t + grid.phase)


def block_residuals(trace, topology) -> np.ndarray:
    """Per-row max |sum of inflow power| over multi-port blocks (0 where none)."""
    out = np.zeros(len(trace))
    states, inverse = np.unique(trace.gates, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    for s_idx, row in enumerate(states):
        gates = GateStates({name: bool(row[j]) for j, name in enumerate(trace.switches)})
        mask = inverse == s_idx
        for block in connectivity(topology, gates):
            if len(block) < 2:
                continue
            cols = [trace.col(p) for p in block]
            res = np.abs(trace.p[mask][:, cols].sum(axis=1))
            out[mask] = np.maximum(out[mask], res)
    return out


def summarize(result, pre_window=None, post_window=None) -> dict:
    s = result.scenario
    tr = result.trace
    if len(tr) == 0:
        raise ConfigurationError("empty trace")
    pre_window = pre_window or s.pre_window
    post_window = post_window or s.post_window
    show = [p for p in s.trace_ports]

    pre = steady_powers(tr, pre_window)
    post = steady_powers(tr, post_window)

    v_dev = np.abs(tr.v - ideal_voltage(s.grid, tr.t)[:, None])
    period = 1.0 / s.grid.f_line
    switches = []
    for ev in result.switches:
        around = tr.window(ev.t_detect - period, ev.t_detect + 2 * period)
        switches.append(dict(
            t_detect=ev.t_detect,
            t_gate_change=ev.t_gate_change,
            source_mode=ev.source_mode,
            target_mode=ev.target_mode,
            watch_port=ev.watch_port,
            p_avg_at_detect=ev.p_avg,
            max_voltage_deviation=float(v_dev[around].max()) if v_dev[around].size else 0.0,
        ))

    dp = np.abs(np.diff(tr.p_act)) if len(tr) > 1 else np.zeros(0)
    peak_i = {p: float(np.abs(tr.i[:, tr.col(p)]).max()) for p in tr.ports}
    peak_v = {p: float(np.abs(tr.v[:, tr.col(p)]).max()) for p in tr.ports}
    topo = s.topology
    dt = s.dt

    houses = {}
    for j, hp in enumerate(tr.house_ports):
        exported = (tr.house_net[:, j] - tr.p[:, tr.col(hp)]).sum() * dt / 3600.0
        houses[hp] = dict(net_injection_end=float(tr.house_net[-1, j]),
                          grid_exchange_wh=float(exported))

    return dict(
        duration=s.duration,
        fs=s.fs,
        samples=len(tr),
        switch_time=switches[0]["t_detect"] if switches else None,
        switches=switches,
        rejected_commands=[dict(t=t, target=m, reason=r) for t, m, r in result.rejected],
        pre_window=list(pre_window),
        post_window=list(post_window),
        steady_pre={p: pre[p] for p in show},
        steady_post={p: post[p] for p in show},
        max_voltage_deviation=float(v_dev.max()),
        power_balance_residual_max=float(block_residuals(tr, topo).max()),
        max_dp_act_per_step=float(dp.max()) if dp.size else 0.0,
        slew_bound_per_step=s.battery.slew * dt,
        peak_current=peak_i,
        peak_voltage=peak_v,
        ratings_ok=bool(max(peak_i.values()) <= topo.current_limit
                        and max(peak_v.values()) <= topo.voltage_limit),
        ledger_wh={f"{a}->{b}": e for (a, b), e in sorted(result.ledger.entries.items())},
        ledger_total_wh=result.ledger.total_wh,
        soc_start=result.soc_start,
        soc_end=result.soc_end,
        houses=houses,
    )


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    return obj
