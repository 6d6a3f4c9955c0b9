"""Per-pair energy attribution.

While two ports share a circuit, the one with positive averaged inflow is the
source and the other the sink. Energy is integrated from the averaged power
(rectangle rule, one sample at a time) and booked against the ordered pair.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import MultiConnectionError
from .matrix import Partition

SECONDS_PER_HOUR = 3600.0


@dataclass
class LedgerInterval:
    """A stretch of time with one fixed set of connected pairs and one mode."""

    start: float
    end: float
    mode: str
    pairs: frozenset
    energy_wh: dict = field(default_factory=lambda: defaultdict(float))


class EnergyLedger:
    def __init__(self, ports: Iterable[int] = (1, 2, 3, 4)):
        self.ports = tuple(ports)
        self.entries: dict[tuple[int, int], float] = defaultdict(float)
        self.intervals: list[LedgerInterval] = []
        self._current: LedgerInterval | None = None
        self._last_partition = None
        self._last_pairs = frozenset()

    @property
    def total_wh(self) -> float:
        return math.fsum(self.entries.values())

    def update(self, partition: Partition, averages: Mapping[int, float | None],
               dt: float, t: float = math.nan, mode: str = "") -> None:
        if partition is not self._last_partition:
            self._last_partition = partition
            self._last_pairs = frozenset(b for b in partition if len(b) == 2)
        pairs = self._last_pairs
        cur = self._current
        if cur is None or cur.pairs != pairs or cur.mode != mode:
            if cur is not None:
                cur.end = t
            cur = self._current = LedgerInterval(t, math.nan, mode, pairs)
            self.intervals.append(cur)

        for block in partition:
            if len(block) == 1:
                continue
            if len(block) > 2:
                raise MultiConnectionError(f"cannot attribute energy in block {sorted(block)}")
            a, b = sorted(block)
            pa, pb = averages.get(a), averages.get(b)
            if pa is None or pb is None:
                continue
            src, snk, p = (a, b, pa) if pa >= pb else (b, a, pb)
            if p <= 0.0:
                continue
            e = p * dt / SECONDS_PER_HOUR
            self.entries[(src, snk)] += e
            cur.energy_wh[(src, snk)] += e

    def close(self, t_end: float) -> None:
        if self._current is not None:
            self._current.end = t_end

    def rows(self) -> list[dict]:
        """One row per (interval, pair direction) with nonzero energy, plus totals."""
        out = []
        for iv in self.intervals:
            for (src, snk), e in sorted(iv.energy_wh.items()):
                out.append(dict(kind="interval", start=iv.start, end=iv.end, mode=iv.mode,
                                source=src, sink=snk, energy_wh=e))
        for (src, snk), e in sorted(self.entries.items()):
            out.append(dict(kind="total", start=math.nan, end=math.nan, mode="",
                            source=src, sink=snk, energy_wh=e))
        return out

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("kind,start,end,mode,source,sink,energy_wh\n")
            for r in self.rows():
                start = "" if math.isnan(r["start"]) else f"{r['start']:.9f}"
                end = "" if math.isnan(r["end"]) else f"{r['end']:.9f}"
                fh.write(f"{r['kind']},{start},{end},{r['mode']},{r['source']},{r['sink']},"
                         f"{r['energy_wh']:.12f}\n")


def ledger_update(ledger: EnergyLedger, partition: Partition,
                  averages: Mapping[int, float | None], dt: float) -> EnergyLedger:
    ledger.update(partition, averages, dt)
    return ledger
