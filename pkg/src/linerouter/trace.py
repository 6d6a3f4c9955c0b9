"""Columnar simulation trace and its CSV form.

CSV layout: ``t,v1,i1,p1,pavg1,...,mode,sw1a,sw2a`` with one group of four
columns per traced port and one 0/1 column per switch. Numbers use fixed
decimals; an averaged power that is not ready yet is written as ``nan``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

T_FMT = "{:.9f}"
X_FMT = "{:.6f}"


@dataclass(frozen=True)
class TraceRecord:
    t: float
    v: dict
    i: dict
    p: dict
    p_avg: dict
    mode: str
    gates: dict


@dataclass
class Trace:
    ports: tuple[int, ...]
    switches: tuple[str, ...]
    modes: tuple[str, ...]
    house_ports: tuple[int, ...]
    t: np.ndarray
    v: np.ndarray
    i: np.ndarray
    p: np.ndarray
    pavg: np.ndarray
    mode: np.ndarray
    gates: np.ndarray
    p_act: np.ndarray
    soc: np.ndarray
    house_net: np.ndarray

    @classmethod
    def allocate(cls, n, ports, switches, modes, house_ports=()) -> Trace:
        np_ = len(ports)
        return cls(
            tuple(ports), tuple(switches), tuple(modes), tuple(house_ports),
            t=np.zeros(n), v=np.zeros((n, np_)), i=np.zeros((n, np_)), p=np.zeros((n, np_)),
            pavg=np.full((n, np_), np.nan), mode=np.zeros(n, dtype=np.int16),
            gates=np.zeros((n, len(switches)), dtype=np.int8),
            p_act=np.zeros(n), soc=np.zeros(n), house_net=np.zeros((n, len(house_ports))),
        )

    def __len__(self):
        return len(self.t)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0]) if len(self.t) > 1 else math.nan

    def col(self, port: int) -> int:
        return self.ports.index(port)

    def mode_names(self) -> list[str]:
        return [self.modes[j] for j in self.mode]

    def record(self, k: int) -> TraceRecord:
        j = {p: self.col(p) for p in self.ports}
        avg = {p: (None if math.isnan(self.pavg[k, c]) else float(self.pavg[k, c]))
               for p, c in j.items()}
        return TraceRecord(
            t=float(self.t[k]),
            v={p: float(self.v[k, c]) for p, c in j.items()},
            i={p: float(self.i[k, c]) for p, c in j.items()},
            p={p: float(self.p[k, c]) for p, c in j.items()},
            p_avg=avg,
            mode=self.modes[self.mode[k]],
            gates={s: bool(self.gates[k, c]) for c, s in enumerate(self.switches)},
        )

    def gate_change_rows(self) -> np.ndarray:
        """Row indices whose gate states differ from the previous row."""
        if len(self) < 2:
            return np.zeros(0, dtype=int)
        diff = np.any(self.gates[1:] != self.gates[:-1], axis=1)
        return np.flatnonzero(diff) + 1

    def window(self, t0: float, t1: float) -> slice:
        """Rows with t0 <= t < t1."""
        a = int(np.searchsorted(self.t, t0 - 1e-12, side="left"))
        b = int(np.searchsorted(self.t, t1 - 1e-12, side="left"))
        return slice(a, b)

    def header(self, ports=None) -> list[str]:
        ports = self.ports if ports is None else ports
        cols = ["t"]
        for p in ports:
            cols += [f"v{p}", f"i{p}", f"p{p}", f"pavg{p}"]
        cols.append("mode")
        cols += [s.lower() for s in self.switches]
        return cols

    def write_csv(self, path, ports=None, decimate: int = 1) -> int:
        """Write every ``decimate``-th row; returns the number of data rows."""
        ports = self.ports if ports is None else tuple(ports)
        cols = [self.col(p) for p in ports]
        rows = range(0, len(self), int(decimate))
        x = X_FMT.format
        with open(path, "w", newline="") as fh:
            fh.write(",".join(self.header(ports)) + "\n")
            for k in rows:
                parts = [T_FMT.format(self.t[k])]
                for c in cols:
                    a = self.pavg[k, c]
                    parts += [x(self.v[k, c]), x(self.i[k, c]), x(self.p[k, c]),
                              "nan" if a != a else x(a)]
                parts.append(self.modes[self.mode[k]])
                parts += ["1" if g else "0" for g in self.gates[k]]
                fh.write(",".join(parts) + "\n")
        return len(rows)


@dataclass
class CsvTrace:
    """A trace read back from CSV. ``lines`` keeps the raw text rows for exact slicing."""

    header: list[str]
    lines: list[str]
    columns: dict[str, np.ndarray]
    mode: list[str]

    @property
    def t(self) -> np.ndarray:
        return self.columns["t"]

    @property
    def switches(self) -> list[str]:
        k = self.header.index("mode")
        return self.header[k + 1:]

    @property
    def ports(self) -> list[int]:
        return [int(h[4:]) for h in self.header if h.startswith("pavg")]

    def gate_change_rows(self) -> np.ndarray:
        g = np.column_stack([self.columns[s] for s in self.switches])
        if len(g) < 2:
            return np.zeros(0, dtype=int)
        return np.flatnonzero(np.any(g[1:] != g[:-1], axis=1)) + 1


def read_csv(path) -> CsvTrace:
    path = Path(path)
    with open(path, newline="") as fh:
        text = fh.read().splitlines()
    if not text:
        raise ValueError(f"{path}: empty trace file")
    header = text[0].split(",")
    lines = text[1:]
    records = list(csv.reader(lines))
    mode_col = header.index("mode")
    columns = {}
    for j, name in enumerate(header):
        if j == mode_col:
            continue
        columns[name] = np.array([float(r[j]) for r in records])
    mode = [r[mode_col] for r in records]
    return CsvTrace(header, lines, columns, mode)
