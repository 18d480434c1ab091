"""Small verified instances of the failure and separation phenomena.

Each :class:`GalleryInstance` stores two (graph, target) pairs and the
expected verdict of every engine: ``True`` means "separates".  The shipped
file ``data/gallery.json`` is re-verified against the live engines whenever
it is loaded.  Instances whose drawings are not recoverable from text are
found by property-directed search; their ``provenance`` says so.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from pathlib import Path

from . import iso, wl
from .formats import graph_from_dict, graph_to_dict, poset_from_dict, poset_to_dict
from .graph import Graph, NodePoset, complete_graph, cycle_graph, disjoint_union, path_graph
from .heuristics import common_neighbors
from .labeling import (hasse_embedding, set_labeling_distinguishes, subset_pooling_distinguishes,
                       zero_one)

DATA = Path(__file__).with_name("data") / "gallery.json"
CONSTRUCTED = "constructed, figure-equivalent"


class GalleryError(RuntimeError):
    """A gallery instance no longer shows the behaviour it was shipped with."""


@dataclass
class GalleryInstance:
    name: str
    description: str
    graphs: tuple
    targets: tuple
    expected: dict
    provenance: str = CONSTRUCTED
    facts: dict = field(default_factory=dict)

    @property
    def matrix(self) -> dict:
        return dict(self.expected)

    def evaluate(self) -> dict:
        """Recompute every engine verdict listed in ``expected``."""
        (g1, g2), (s1, s2) = self.graphs, self.targets
        out = {}
        for key in self.expected:
            if key == "vanilla":
                out[key] = wl.wl_distinguishes(g1, None, s1, g2, None, s2)
            elif key == "set_zo":
                out[key] = set_labeling_distinguishes(g1, s1, g2, s2, zero_one)
            elif key == "subset1":
                out[key] = subset_pooling_distinguishes(g1, s1, g2, s2, 1, readout="head")
            elif key == "hasse":
                out[key] = wl.wl_distinguishes(g1, hasse_embedding(s1, g1), s1,
                                               g2, hasse_embedding(s2, g2), s2)
            elif key == "node_codes":
                out[key] = (sorted(iso.node_codes(g1, sorted(s1.members)))
                            != sorted(iso.node_codes(g2, sorted(s2.members))))
            elif key == "oracle":
                out[key] = not iso.are_substructures_isomorphic(s1, g1, s2, g2)
            else:
                raise GalleryError(f"{self.name}: unknown engine {key!r}")
        return out

    def verify(self) -> None:
        got = self.evaluate()
        if got != self.expected:
            raise GalleryError(f"{self.name}: expected {self.expected}, engines give {got}")

    def to_dict(self) -> dict:
        return {"name": self.name, "description": self.description, "provenance": self.provenance,
                "graphs": [graph_to_dict(g) for g in self.graphs],
                "targets": [poset_to_dict(s) for s in self.targets],
                "expected": self.expected, "facts": self.facts}

    @classmethod
    def from_dict(cls, d: dict) -> "GalleryInstance":
        return cls(d["name"], d["description"], tuple(graph_from_dict(g) for g in d["graphs"]),
                   tuple(poset_from_dict(s) for s in d["targets"]), dict(d["expected"]),
                   d.get("provenance", CONSTRUCTED), d.get("facts", {}))


# -- searches ---------------------------------------------------------------------------

def _atlas_graphs(n_max: int):
    from .audit import enumerate_graphs
    for n in range(1, n_max + 1):
        yield from enumerate_graphs(n)


def search_same_orbit_links(n_max: int = 7):
    """Graph and nodes v1..v4 with v2 ~ v3 (same orbit), (v1,v2) ~ (v4,v3) isomorphic links,
    (v1,v2) not isomorphic to (v1,v3), CN(v1,v2) = 1 and CN(v1,v3) = 0."""
    for g in _atlas_graphs(n_max):
        codes = iso.node_codes(g, g.nodes)
        for v2, v3 in permutations(g.nodes, 2):
            if codes[v2 - 1] != codes[v3 - 1]:
                continue
            for v1 in g.nodes:
                if v1 in (v2, v3):
                    continue
                if common_neighbors(g, v1, v2) != 1 or common_neighbors(g, v1, v3) != 0:
                    continue
                for v4 in g.nodes:
                    if v4 in (v1, v2, v3):
                        continue
                    if iso.are_substructures_isomorphic({v1, v2}, g, {v4, v3}, g):
                        return g, (v1, v2, v3, v4)
    raise GalleryError("no same-orbit link instance within the search bound")


def search_triangle_sets(n_max: int = 7):
    """Graph with isomorphic nodes v3, v4 where {v1,v2,v3} is a triangle and {v1,v2,v4} is not."""
    for g in _atlas_graphs(n_max):
        codes = iso.node_codes(g, g.nodes)
        for v1, v2 in combinations(g.nodes, 2):
            if not g.has_edge(v1, v2):
                continue
            for v3, v4 in permutations(g.nodes, 2):
                if {v3, v4} & {v1, v2} or codes[v3 - 1] != codes[v4 - 1]:
                    continue
                tri3 = g.has_edge(v1, v3) and g.has_edge(v2, v3)
                tri4 = g.has_edge(v1, v4) and g.has_edge(v2, v4)
                if tri3 and not tri4:
                    return g, (v1, v2, v3, v4)
    raise GalleryError("no triangle instance within the search bound")


def search_set_beats_subset(n_max: int = 7, size: int = 3):
    """Two ``size``-sets, not isomorphic, that set zero-one labeling plus 1-WL separates while
    subset(1) head pooling plus 1-WL does not."""
    for g in _atlas_graphs(n_max):
        if g.n < size:
            continue
        sets = list(combinations(g.nodes, size))
        cols = wl.refine_batch([g] * (len(sets) + g.n),
                               [zero_one(set(s), g) for s in sets]
                               + [zero_one({u}, g) for u in g.nodes])
        head = {u: cols[len(sets) + u - 1].color(u) for u in g.nodes}
        for a, b in combinations(range(len(sets)), 2):
            A, B = sets[a], sets[b]
            if sorted(head[u] for u in A) != sorted(head[u] for u in B):
                continue
            if sorted(cols[a].color(u) for u in A) == sorted(cols[b].color(u) for u in B):
                continue
            if not iso.are_substructures_isomorphic(set(A), g, set(B), g):
                return g, A, B
    raise GalleryError("no set-beats-subset instance within the search bound")


def build_gallery() -> list[GalleryInstance]:
    """Construct every instance from scratch (searches included) and verify it."""
    items = []
    c6 = cycle_graph(6)
    items.append(GalleryInstance(
        "c6-link-gae", "C6: links (1,2) and (1,3) have equal unlabeled node codes but differ",
        (c6, c6), (NodePoset.of_set({1, 2}), NodePoset.of_set({1, 3})),
        {"node_codes": False, "vanilla": False, "set_zo": True, "oracle": True},
        "derived: cycle on six nodes", {"cn": [0, 1]}))

    g, (v1, v2, v3, v4) = search_same_orbit_links()
    items.append(GalleryInstance(
        "same-orbit-links", "v2 and v3 share an orbit; link (v1,v2) matches (v4,v3) "
        "but not (v1,v3); common neighbours 1 vs 0",
        (g, g), (NodePoset.of_set({v1, v2}), NodePoset.of_set({v1, v3})),
        {"node_codes": False, "vanilla": False, "set_zo": True, "oracle": True},
        CONSTRUCTED, {"v": [v1, v2, v3, v4],
                      "cn": [common_neighbors(g, v1, v2), common_neighbors(g, v1, v3)]}))

    g, (v1, v2, v3, v4) = search_triangle_sets()
    items.append(GalleryInstance(
        "triangle-vs-open", "v3 and v4 are isomorphic; {v1,v2,v3} is a triangle, "
        "{v1,v2,v4} is not",
        (g, g), (NodePoset.of_set({v1, v2, v3}), NodePoset.of_set({v1, v2, v4})),
        {"node_codes": False, "vanilla": False, "set_zo": True, "oracle": True},
        CONSTRUCTED, {"v": [v1, v2, v3, v4]}))

    k3 = complete_graph(3)
    two_k3 = disjoint_union(k3, k3)
    whole = NodePoset.of_set(range(1, 7))
    items.append(GalleryInstance(
        "c6-vs-2k3-whole-graph", "target is every node: C6 against two disjoint triangles",
        (c6, two_k3), (whole, whole),
        {"vanilla": False, "set_zo": False, "subset1": True, "oracle": True},
        "derived: cycle on six nodes vs two triangles"))

    g, A, B = search_set_beats_subset()
    items.append(GalleryInstance(
        "set-beats-subset", "three-node targets: set labeling separates them, "
        "subset(1) head pooling does not",
        (g, g), (NodePoset.of_set(A), NodePoset.of_set(B)),
        {"set_zo": True, "subset1": False, "oracle": True}, CONSTRUCTED))

    p3 = path_graph(3, directed=True)
    items.append(GalleryInstance(
        "directed-link-order", "directed path 1->2->3: poset 1<2 against 2<1",
        (p3, p3), (NodePoset.chain([1, 2]), NodePoset.chain([2, 1])),
        {"set_zo": False, "hasse": True, "oracle": True}, "derived: directed path"))
    for item in items:
        item.verify()
    return items


def write_gallery(path=DATA) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps([i.to_dict() for i in build_gallery()], indent=2) + "\n")


def load_gallery(path=DATA, verify: bool = True) -> list[GalleryInstance]:
    items = [GalleryInstance.from_dict(d) for d in json.loads(Path(path).read_text())]
    if verify:
        for item in items:
            item.verify()
    return items


@lru_cache(maxsize=1)
def _verified() -> tuple:
    return tuple(load_gallery())


def gallery() -> list[GalleryInstance]:
    """The shipped instances, verified against the engines on first use."""
    return list(_verified())


def get_instance(name: str) -> GalleryInstance:
    for item in gallery():
        if item.name == name:
            return item
    raise KeyError(f"no gallery instance {name!r}")
