"""Graph classes of the bundled fixtures."""

from cmapf import classify, fig1, k3, p3
from cmapf.topo_graph import comm_hop_distances, sight_moveable_pair

for name, g in (("p3", p3()), ("k3", k3()), ("fig1", fig1())):
    flags = classify(g).as_dict()
    print(name, {k: v for k, v in flags.items() if k != "witnesses"})

# fig1 is neighbor-communicable but two radio links cross an obstacle:
# node 2 hears node 8, yet every route between them leaves node 2's range
g = fig1()
print("sm witnesses:", classify(g).witnesses["sight_moveable"])
print("2 ~> 8 walkable in sight:", sight_moveable_pair(g, 2, 8))
print("0 ~> 4 walkable in sight:", sight_moveable_pair(g, 0, 4))

# hop distance from the base bounds how many relays a far node needs
print("comm hops from base:", comm_hop_distances(g))
