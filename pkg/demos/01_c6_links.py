"""Why plain 1-WL cannot tell two links of a six-cycle apart, and what a label fixes.

Run:  python demos/01_c6_links.py
"""

from labelkit import NodePoset, cycle_graph, iso, wl
from labelkit.heuristics import scores
from labelkit.labeling import zero_one

c6 = cycle_graph(6)
near, far = NodePoset.of_set({1, 2}), NodePoset.of_set({1, 3})

# Every node of a cycle looks the same to colour refinement.
print("1-WL colours on C6:", wl.wl_refine(c6).colors)

# So aggregating node colours gives the same answer for an edge and a non-edge.
print("plain 1-WL separates (1,2) from (1,3):",
      wl.wl_distinguishes(c6, None, near, c6, None, far))

# The brute-force oracle knows better: there is no automorphism taking one to the other.
print("oracle says isomorphic:", iso.are_substructures_isomorphic(near, c6, far, c6))

# Marking the two endpoints with 1 (everything else 0) breaks the symmetry.
print("zero-one labeled 1-WL separates them:",
      wl.wl_distinguishes(c6, zero_one(near, c6), near, c6, zero_one(far, c6), far))
for lab, s in (("(1,2)", near), ("(1,3)", far)):
    col = wl.wl_refine(c6, zero_one(s, c6))
    print(f"  colours with {lab} marked:", col.colors)

# The classic heuristics see the difference too, through the one shared neighbour.
print("heuristics (1,2):", scores(c6, 1, 2))
print("heuristics (1,3):", scores(c6, 1, 3))
