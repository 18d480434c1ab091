"""A tour of the labeling tricks on a small graph, plus the validity checker.

Run:  python demos/02_labeling_tricks.py
"""

from labelkit import NodePoset, path_graph
from labelkit.graph import Graph
from labelkit.labeling import (BROKEN_TRICK, distance_encoding, drnl, drnl_label,
                               hasse_embedding, linear_order_labels, validate_labeling_trick,
                               zero_one)

# A path 1-2-3-4-5-6 with a chord 2-5.
g = Graph.from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 5)])
link = {2, 4}

print("zero-one  ", [r[0] for r in zero_one(link, g).labels])
print("DRNL      ", [r[0] for r in drnl(link, g).labels])
print("DE (cap 3)", list(distance_encoding(link, g).labels))

# DRNL hashes the two masked distances; a few values of the closed form:
print("DRNL table:", {(a, b): drnl_label(a, b) for a in range(1, 4) for b in range(a, 4)})

# Poset targets: an ordered chain labels its members by rank.
chain = NodePoset.chain([5, 1, 3])
print("linear order labels for 5<1<3:", [r[0] for r in linear_order_labels(chain, g).labels])

# On a directed path the Hasse labels tell a source from a sink.
p3 = path_graph(3, directed=True)
print("hasse 1<2:", hasse_embedding(NodePoset.chain([1, 2]), p3).dense().labels)
print("hasse 2<1:", hasse_embedding(NodePoset.chain([2, 1]), p3).dense().labels)

# The checker samples random graphs, targets and permutations.
for trick in ("zero_one", "drnl", "de_plus"):
    print(f"{trick:9s} violations:", validate_labeling_trick(trick, trials=200).violations)
print("deliberately broken trick:", validate_labeling_trick(BROKEN_TRICK, trials=200).violations)

# Node-only Hasse labels cannot tell two disjoint 2-chains apart up to relabeling,
# so the checker reports distinguishing violations for some seeds.
print("hasse violations at seed 1:", validate_labeling_trick("hasse", trials=500, seed=1).violations)
