"""
Ego networks and the directed clustering coefficient
=====================================================

Build the ego network of one account from a handful of transfers and see
how alter-to-alter trades move its local clustering coefficient.
"""

from egotemporal import TransactionRecord, TransactionSet, build_ego_network, local_clustering_coefficient
from egotemporal.txmodel import ether

# The ego "E" trades with a, b and c. The transfer c -> z involves an
# outsider and never enters E's network.
records = [
    TransactionRecord("a", "E", ether("2.0"), 100),
    TransactionRecord("E", "b", ether("0.5"), 160),
    TransactionRecord("E", "c", ether("1.0"), 220),
    TransactionRecord("c", "z", ether("9.0"), 230),
]
net = build_ego_network("E", TransactionSet(records))
print("alters:", sorted(net.alters), "k =", net.k)
print("tau (star):", local_clustering_coefficient(net))

# One alter-to-alter trade fills 1 of the k(k-1) = 6 ordered pairs.
records.append(TransactionRecord("a", "b", ether("0.1"), 300))
net = build_ego_network("E", TransactionSet(records))
print("tau after a -> b:", round(local_clustering_coefficient(net), 4))

# Repeating the same trade does not count again; the reverse direction does.
records += [TransactionRecord("a", "b", ether("0.1"), 310), TransactionRecord("b", "a", ether("0.1"), 320)]
net = build_ego_network("E", TransactionSet(records))
print("distinct alter edges:", sorted(net.distinct_alter_edges))
print("tau after b -> a:", round(local_clustering_coefficient(net), 4))
