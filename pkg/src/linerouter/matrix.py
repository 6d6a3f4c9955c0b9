"""Crossbar switch matrix: topology, gate states and port connectivity.

A closed switch joins the two ports it bridges into one circuit. Ports that
are not joined by any path of closed switches are electrically isolated from
each other.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .errors import ConfigurationError, MultiConnectionError

PORTS: tuple[int, ...] = (1, 2, 3, 4)


def check_port(p: int) -> int:
    if p not in PORTS:
        raise ConfigurationError(f"unknown port {p!r}; ports are {PORTS}")
    return p


@dataclass(frozen=True)
class SwitchTopology:
    """Which bidirectional switches exist and which port pair each one bridges.

    Ratings are kept for post-run diagnostics only; nothing in the simulation
    enforces them.
    """

    bridges: Mapping[str, tuple[int, int]]
    voltage_limit: float = 650.0
    current_limit: float = 20.0
    ports: tuple[int, ...] = PORTS

    def __post_init__(self):
        clean = {}
        for name, pair in self.bridges.items():
            a, b = (check_port(int(p)) for p in pair)
            if a == b:
                raise ConfigurationError(f"switch {name} bridges port {a} to itself")
            clean[str(name)] = (min(a, b), max(a, b))
        if not clean:
            raise ConfigurationError("topology has no switches")
        if self.voltage_limit <= 0 or self.current_limit <= 0:
            raise ConfigurationError("switch ratings must be positive")
        object.__setattr__(self, "bridges", dict(clean))

    @property
    def switches(self) -> tuple[str, ...]:
        return tuple(self.bridges)

    def has_parallel_switches(self) -> bool:
        pairs = list(self.bridges.values())
        return len(set(pairs)) != len(pairs)

    def all_off(self) -> GateStates:
        return GateStates({name: False for name in self.bridges})


def default_topology() -> SwitchTopology:
    """The two-switch subset wired in the three-port experiment."""
    return SwitchTopology({"SW1A": (1, 3), "SW2A": (2, 3)})


def extended_topology() -> SwitchTopology:
    """An 8-switch matrix over the four ports.

    Only SW1A and SW2A are documented for the real hardware. The remaining
    assignments are a guess: the 2x2 crossbar (houses 1, 2 against storage
    ports 3, 4), a house tie, a storage tie, and second poles on the two
    switches used in the experiment.
    """
    return SwitchTopology(
        {
            "SW1A": (1, 3),
            "SW2A": (2, 3),
            "SW1B": (1, 4),
            "SW2B": (2, 4),
            "SW12": (1, 2),
            "SW34": (3, 4),
            "SW1A2": (1, 3),
            "SW2A2": (2, 3),
        }
    )


@dataclass(frozen=True, eq=False, repr=False)
class GateStates(Mapping):
    """Immutable on/off state per switch name."""

    state: Mapping[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "state", {str(k): bool(v) for k, v in self.state.items()})

    def __getitem__(self, name: str) -> bool:
        return self.state[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.state)

    def __len__(self) -> int:
        return len(self.state)

    def __hash__(self):
        return hash(tuple(sorted(self.state.items())))

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self.state) == dict(other)
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{k}={'ON' if v else 'OFF'}" for k, v in self.state.items())
        return f"GateStates({body})"

    def closed(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.state.items() if v)

    def validate(self, topology: SwitchTopology) -> GateStates:
        unknown = set(self.state) - set(topology.bridges)
        if unknown:
            raise ConfigurationError(f"unknown switch(es): {sorted(unknown)}")
        missing = set(topology.bridges) - set(self.state)
        if missing:
            raise ConfigurationError(f"gate states missing switch(es): {sorted(missing)}")
        return self


def set_gate(gates: GateStates, sw: str, on: bool) -> GateStates:
    if sw not in gates:
        raise ConfigurationError(f"unknown switch {sw!r}")
    new = dict(gates.state)
    new[sw] = bool(on)
    return GateStates(new)


class UnionFind:
    """Disjoint sets over hashable items, path halving and union by size."""

    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in self.parent}

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self) -> list[frozenset]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return [frozenset(g) for g in out.values()]


Partition = frozenset  # frozenset of frozenset[int]


def connectivity(topology: SwitchTopology, gates: GateStates) -> Partition:
    """Partition the ports into blocks joined by closed switches."""
    gates.validate(topology)
    uf = UnionFind(topology.ports)
    for name, (a, b) in topology.bridges.items():
        if gates[name]:
            uf.union(a, b)
    return frozenset(uf.groups())


def block_of(partition: Partition, p: int) -> frozenset:
    for block in partition:
        if p in block:
            return block
    raise ConfigurationError(f"port {p} not in partition")


def connected_peer(topology: SwitchTopology, gates: GateStates, p: int) -> int | None:
    """The single port connected to ``p``, or None when ``p`` is isolated.

    Raises MultiConnectionError when ``p`` shares a circuit with more than one
    other port, since pairwise energy attribution is then undefined.
    """
    return peer_in(connectivity(topology, gates), check_port(p))


def peer_in(partition: Partition, p: int) -> int | None:
    block = block_of(partition, p)
    if len(block) == 1:
        return None
    if len(block) > 2:
        raise MultiConnectionError(
            f"port {p} is connected to ports {sorted(block - {p})} at once"
        )
    (other,) = block - {p}
    return other
