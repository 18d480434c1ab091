"""Labeling only part of the target, and ordered targets on directed graphs.

Run:  python demos/03_subsets_and_posets.py
"""

from labelkit import gallery, wl
from labelkit.graph import (NodePoset, complete_graph, cycle_graph, disjoint_union,
                            path_graph)
from labelkit.labeling import (hasse_embedding, set_labeling_distinguishes,
                               subset_pooling_distinguishes, zero_one)

c6 = cycle_graph(6)
two_triangles = disjoint_union(complete_graph(3), complete_graph(3))
whole = NodePoset.of_set(range(1, 7))

# With every node in the target, a zero-one label is uniform and changes nothing.
print("set labeling separates C6 from 2K3:",
      set_labeling_distinguishes(c6, whole, two_triangles, whole))

# Labeling one node at a time and pooling over the choices does see the triangles.
print("subset(1) pooling separates them:",
      subset_pooling_distinguishes(c6, whole, two_triangles, whole, 1))

# A directed link read as an ordered pair: 1<2 against 2<1 on the path 1->2->3.
p3 = path_graph(3, directed=True)
fwd, back = NodePoset.chain([1, 2]), NodePoset.chain([2, 1])
print("zero-one separates the two orders:",
      wl.wl_distinguishes(p3, zero_one(fwd, p3), fwd, p3, zero_one(back, p3), back))
print("Hasse labels separate them:",
      wl.wl_distinguishes(p3, hasse_embedding(fwd, p3), fwd, p3, hasse_embedding(back, p3), back))

# The shipped gallery collects these cases and re-checks them on load.
for item in gallery.gallery():
    print(f"  {item.name:24s} {item.evaluate()}")
