"""Acceptance gate.

Each test checks one criterion at its fixed tolerance and records a one-line
verdict that is printed in the pytest terminal summary.
"""

import itertools
import math
import time

import numpy as np

from conftest import ACCEPTANCE_RESULTS
from linerouter import BatteryState, Event, Scenario, default_scenario, run_scenario
from linerouter.matrix import GateStates, connectivity, default_topology, extended_topology
from linerouter.sense import PowerAverager

FS, F_LINE = 12000.0, 60.0
WINDOW_S = 1.0 / F_LINE
EPS = 5.0


def report(key, ok, detail):
    ACCEPTANCE_RESULTS[key] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
    assert ok, detail


def exhaustive_partition(topology, gates):
    edges = [topology.bridges[s] for s in topology.switches if gates[s]]

    def walk(node, seen):
        yield node
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == node and y not in seen:
                    yield from walk(y, seen | {y})

    return frozenset(frozenset(walk(p, {p})) for p in topology.ports)


def test_ac1_steady_states():
    t0 = time.perf_counter()
    r = run_scenario(default_scenario())
    elapsed = time.perf_counter() - t0
    s = r.summary()
    assert s["pre_window"][1] - s["pre_window"][0] == 0.5
    assert s["post_window"][1] - s["post_window"][0] == 0.5
    expect_pre = {1: 700.0, 2: 0.0, 3: -700.0}
    expect_post = {1: 0.0, 2: -700.0, 3: 700.0}
    tol = 0.01 * 700.0  # 1 % of the 700 W operating point, also applied to the 0 W ports
    err = max(max(abs(s["steady_pre"][p] - expect_pre[p]) for p in expect_pre),
              max(abs(s["steady_post"][p] - expect_post[p]) for p in expect_post))
    pre = ", ".join(f"{s['steady_pre'][p]:+.3f}" for p in (1, 2, 3))
    post = ", ".join(f"{s['steady_post'][p]:+.3f}" for p in (1, 2, 3))
    report("AC1 steady states", err <= tol and elapsed < 5.0,
           f"pre=({pre}) W post=({post}) W, max err {err:.2e} W <= {tol} W; "
           f"runtime {elapsed:.2f} s < 5 s")


def test_ac2_switch_time(default_run):
    t_sw = default_run.switches[0].t_detect
    report("AC2 switch timing", abs(t_sw - 1.973) <= WINDOW_S,
           f"detected {t_sw:.6f} s, |dt| = {abs(t_sw - 1.973) * 1e3:.2f} ms <= {WINDOW_S * 1e3:.1f} ms")


def random_scenario(rng):
    slew = rng.uniform(100, 2000)
    p_from = rng.uniform(100, 2000)
    p_to = rng.uniform(100, 2000)
    t_cmd = rng.uniform(0.05, 0.5)
    charge_first = bool(rng.integers(2))
    sign = 1.0 if charge_first else -1.0
    start, target = ("Mode1", "Mode2") if charge_first else ("Mode2", "Mode1")
    duration = round(t_cmd + p_from / slew + 0.1, 3)
    return Scenario(
        duration=duration,
        initial_mode=start,
        battery=BatteryState(sign * p_from, sign * p_from, slew=slew),
        events=(Event(t_cmd, "battery_ref", p_ref=-sign * p_to),
                Event(t_cmd, "mode_command", target=target, watch_port=3)),
        pre_window=(0.0, duration / 2),
        post_window=(duration / 2, duration),
    )


def test_ac3_switch_at_zero_randomized():
    rng = np.random.default_rng(20240917)
    violations, switched, worst = 0, 0, 0.0
    for _ in range(100):
        s = random_scenario(rng)
        r = run_scenario(s)
        tr = r.trace
        c = tr.col(3)
        switched += len(r.switches)
        rows = list(tr.gate_change_rows()) + [sw.sample for sw in r.switches]
        for k in rows:
            p = abs(tr.pavg[k, c])
            worst = max(worst, p)
            violations += not p < s.epsilon
    report("AC3 switch at zero", violations == 0 and switched == 100,
           f"100 scenarios, {switched} switches, {violations} violations, "
           f"max |pavg_watch| at a gate change {worst:.6f} W < {EPS} W")


def test_ac4_voltage_cleanliness(default_run):
    tr = default_run.trace
    g = default_run.scenario.grid
    worst = 0.0
    for k in tr.gate_change_rows():
        sl = slice(max(0, k - 3 * 200), k + 3 * 200)
        ideal = math.sqrt(2) * g.vrms * np.sin(2 * np.pi * g.f_line * tr.t[sl] + g.phase)
        worst = max(worst, float(np.abs(tr.v[sl] - ideal[:, None]).max()))
    report("AC4 voltage cleanliness", worst <= 1e-12 and len(tr.gate_change_rows()) > 0,
           f"max |v - v_ideal| within 3 periods of each switch = {worst:.3e} V <= 1e-12 V")


def test_ac5_averaging_correctness():
    rng = np.random.default_rng(5)
    n = int(FS / F_LINE)
    worst_rel, worst_naive = 0.0, 0.0
    for _ in range(50):
        # magnitudes of the studied operating range (|P| <= 2.4 kW); above ~8 kW a
        # single ulp of the mean already exceeds the 1e-12 W bound
        vrms, irms = rng.uniform(100, 240), rng.uniform(0.5, 10)
        phi = rng.uniform(-math.pi, math.pi)
        k = np.arange(rng.integers(0, 1000), 3 * n + 1000)
        wt = 2 * np.pi * F_LINE * k / FS
        p = (math.sqrt(2) * vrms * np.sin(wt)) * (math.sqrt(2) * irms * np.sin(wt - phi))
        avg = PowerAverager(n)
        out = [avg.update(float(x)) for x in p]
        expected = vrms * irms * math.cos(phi)
        worst_rel = max(worst_rel, abs(out[-1] - expected) / abs(expected))
        for j in range(n - 1, len(p)):
            worst_naive = max(worst_naive, abs(out[j] - math.fsum(p[j - n + 1:j + 1]) / n))
    report("AC5 averaging correctness", worst_rel <= 1e-6 and worst_naive <= 1e-12,
           f"max rel err vs VI cos(phi) {worst_rel:.2e} <= 1e-6; "
           f"max |ring - naive mean| {worst_naive:.2e} <= 1e-12")


def test_ac6_connectivity_oracle():
    cases, mismatches = 0, 0
    for topo in (default_topology(), extended_topology()):
        for bits in itertools.product((False, True), repeat=len(topo.switches)):
            gates = GateStates(dict(zip(topo.switches, bits)))
            cases += 1
            mismatches += connectivity(topo, gates) != exhaustive_partition(topo, gates)
    report("AC6 connectivity oracle", mismatches == 0 and cases == 4 + 256,
           f"{cases} gate combinations (2 + 8 switches), {mismatches} mismatches")


def test_ac7_ledger_conservation(default_run):
    tr = default_run.trace
    positive = np.clip(np.nan_to_num(tr.pavg), 0.0, None).sum(axis=1)
    oracle = np.trapezoid(positive, tr.t) / 3600.0
    total = default_run.ledger.total_wh
    rel = abs(total - oracle) / oracle
    report("AC7 ledger conservation", rel <= 1e-4,
           f"ledger {total:.9f} Wh vs trapezoid {oracle:.9f} Wh, rel diff {rel:.2e} <= 1e-4")


def test_ac8_power_balance(default_run):
    tr = default_run.trace
    topo = default_run.scenario.topology
    worst = 0.0
    for k in range(len(tr)):
        gates = GateStates({s: bool(tr.gates[k, j]) for j, s in enumerate(tr.switches)})
        for block in exhaustive_partition(topo, gates):
            if len(block) > 1:
                worst = max(worst, abs(sum(tr.p[k, tr.col(p)] for p in block)))
    report("AC8 power balance", worst <= 1e-9,
           f"max per-sample block power sum {worst:.3e} W <= 1e-9 W over {len(tr)} samples")


def test_ac9_determinism(tmp_path):
    paths = []
    for j in range(2):
        r = run_scenario(default_scenario())
        path = tmp_path / f"trace{j}.csv"
        r.trace.write_csv(path, ports=(1, 2, 3))
        paths.append(path)
    a, b = (p.read_bytes() for p in paths)
    report("AC9 determinism", a == b and len(a) > 0,
           f"two runs, trace CSVs of {len(a)} bytes, byte-identical: {a == b}")
