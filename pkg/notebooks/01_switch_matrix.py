"""
Switch matrix and port connectivity
===================================

Which ports end up electrically joined for a given set of gate signals.
"""

# %%
from linerouter import GateStates, connectivity, default_topology, extended_topology
from linerouter.matrix import connected_peer

topo = default_topology()
print(topo)

# %% Mode 1 closes SW1A, joining house 1 to the battery port.
mode1 = GateStates({"SW1A": True, "SW2A": False})
print(sorted(map(sorted, connectivity(topo, mode1))))
print("peer of port 3:", connected_peer(topo, mode1, 3))

# %% Closing both switches would bridge two houses onto the battery line.
both = GateStates({"SW1A": True, "SW2A": True})
print(sorted(map(sorted, connectivity(topo, both))))

# %% The eight-switch layout enumerates to 256 gate combinations.
big = extended_topology()
sizes = {}
for bits in range(2 ** len(big.switches)):
    gates = GateStates({s: bool(bits >> j & 1) for j, s in enumerate(big.switches)})
    largest = max(len(b) for b in connectivity(big, gates))
    sizes[largest] = sizes.get(largest, 0) + 1
print("largest block size -> count:", dict(sorted(sizes.items())))
