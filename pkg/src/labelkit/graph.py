"""Graph, poset and hypergraph values plus the structural operations on them.

Nodes are numbered ``1..n``.  All values are immutable; every operation
returns a new value.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

Feature = tuple  # tuple of int / Fraction

INF = math.inf


class GraphError(ValueError):
    """Raised when a graph, poset or hypergraph violates its invariants."""


class PosetError(GraphError):
    """Raised when a relation is not a partial order."""


def _feature(values: Iterable) -> Feature:
    out = []
    for v in values:
        if isinstance(v, bool):
            v = int(v)
        if isinstance(v, float):
            v = Fraction(str(v))
        if isinstance(v, Fraction) and v.denominator == 1:
            v = int(v)
        out.append(v)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Graph:
    """Attributed, possibly directed graph on nodes ``1..n``.

    ``edges`` holds ordered pairs; an undirected graph stores both
    orientations of every edge.  ``node_features[i - 1]`` is the feature
    vector of node ``i`` and ``edge_features`` maps ordered pairs to theirs.
    """

    n: int
    edges: frozenset = frozenset()
    directed: bool = False
    node_features: tuple = ()
    edge_features: Mapping = field(default_factory=dict)

    def __post_init__(self):
        n = self.n
        if n < 0:
            raise GraphError("node count must be non-negative")
        edges = set()
        for i, j in self.edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"edge ({i}, {j}) has an endpoint outside 1..{n}")
            if i == j:
                raise GraphError(f"self loop ({i}, {i}) is not supported")
            edges.add((int(i), int(j)))
        feats = {}
        for (i, j), f in dict(self.edge_features).items():
            if (i, j) not in edges:
                raise GraphError(f"edge feature given for missing edge ({i}, {j})")
            feats[(i, j)] = _feature(f)
        if not self.directed:
            for i, j in list(edges):
                if (j, i) in feats and (i, j) in feats and feats[(i, j)] != feats[(j, i)]:
                    raise GraphError(f"undirected edge ({i}, {j}) has asymmetric features")
                edges.add((j, i))
            for (i, j), f in list(feats.items()):
                feats.setdefault((j, i), f)
        edim = {len(f) for f in feats.values()}
        if len(edim) > 1:
            raise GraphError("edge feature vectors must share one dimension")
        d_e = edim.pop() if edim else 0
        for e in edges:
            feats.setdefault(e, (0,) * d_e)
        if self.node_features:
            nf = tuple(_feature(f) for f in self.node_features)
            if len(nf) != n:
                raise GraphError(f"expected {n} node feature vectors, got {len(nf)}")
            if len({len(f) for f in nf}) > 1:
                raise GraphError("node feature vectors must share one dimension")
        else:
            nf = ((),) * n
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "edge_features", feats)
        object.__setattr__(self, "node_features", nf)

    # -- construction helpers -------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], directed: bool = False,
                   node_features=None) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), directed,
                   tuple(node_features) if node_features is not None else ())

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and self.directed == other.directed
                and self.edges == other.edges
                and self.node_features == other.node_features
                and self.edge_features == other.edge_features)

    def __hash__(self):
        return hash((self.n, self.directed, self.edges, self.node_features))

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, {kind}, edges={sorted(self.undirected_edges())})"

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    @property
    def node_dim(self) -> int:
        return len(self.node_features[0]) if self.n else 0

    @cached_property
    def out_adj(self) -> tuple:
        adj = [[] for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].append(j)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def in_adj(self) -> tuple:
        adj = [[] for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbors(self, i: int) -> tuple:
        """Out-neighbours of ``i`` (all neighbours for undirected graphs)."""
        return self.out_adj[i]

    def degree(self, i: int) -> int:
        return len(self.out_adj[i])

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def undirected_edges(self) -> list:
        if self.directed:
            return sorted(self.edges)
        return sorted((i, j) for i, j in self.edges if i < j)

    @property
    def num_edges(self) -> int:
        return len(self.edges) if self.directed else len(self.edges) // 2

    def with_node_features(self, features: Sequence) -> "Graph":
        return Graph(self.n, self.edges, self.directed, tuple(features), self.edge_features)

    def without_edges(self, pairs: Iterable[Sequence[int]]) -> "Graph":
        drop = set()
        for i, j in pairs:
            drop.add((i, j))
            if not self.directed:
                drop.add((j, i))
        edges = self.edges - drop
        feats = {e: f for e, f in self.edge_features.items() if e in edges}
        return Graph(self.n, edges, self.directed, self.node_features, feats)

    def induced_subgraph(self, keep: Iterable[int]) -> tuple["Graph", dict]:
        """Subgraph induced by ``keep``; returns it and the old -> new index map."""
        keep = sorted(set(keep))
        index = {v: k + 1 for k, v in enumerate(keep)}
        edges = {(index[i], index[j]) for i, j in self.edges if i in index and j in index}
        feats = {(index[i], index[j]): f for (i, j), f in self.edge_features.items()
                 if i in index and j in index}
        nf = tuple(self.node_features[v - 1] for v in keep)
        return Graph(len(keep), frozenset(edges), self.directed, nf, feats), index


@dataclass(frozen=True)
class NodePoset:
    """A node set with a partial order; a plain set has only reflexive pairs."""

    members: frozenset
    relation: frozenset

    def __post_init__(self):
        members = frozenset(int(u) for u in self.members)
        relation = set((int(u), int(v)) for u, v in self.relation)
        for u, v in relation:
            if u not in members or v not in members:
                raise PosetError(f"relation pair ({u}, {v}) leaves the member set")
        relation |= {(u, u) for u in members}
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "relation", frozenset(relation))
        self.validate()

    @classmethod
    def of_set(cls, members: Iterable[int]) -> "NodePoset":
        members = frozenset(members)
        return cls(members, frozenset())

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], members: Iterable[int] = ()) -> "NodePoset":
        """Poset generated by ``pairs`` under reflexive-transitive closure."""
        pairs = [tuple(p) for p in pairs]
        mem = set(members)
        for u, v in pairs:
            mem.update((u, v))
        return cls(frozenset(mem), transitive_closure(pairs, mem))

    @classmethod
    def chain(cls, order: Sequence[int]) -> "NodePoset":
        return cls.from_pairs(zip(order, order[1:]), order)

    def validate(self) -> None:
        rel = self.relation
        for u, v in rel:
            if u != v and (v, u) in rel:
                raise PosetError(f"antisymmetry violated by {u} <= {v} <= {u}")
        for u, v in rel:
            for w in self.members:
                if (v, w) in rel and (u, w) not in rel:
                    raise PosetError(f"transitivity violated: {u} <= {v} <= {w} but not {u} <= {w}")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def is_set(self) -> bool:
        return all(u == v for u, v in self.relation)

    def strict_pairs(self) -> list:
        return sorted((u, v) for u, v in self.relation if u != v)

    def leq(self, u: int, v: int) -> bool:
        return (u, v) in self.relation

    def is_total(self) -> bool:
        return all(self.leq(u, v) or self.leq(v, u) for u, v in combinations(self.members, 2))

    def relabel(self, mapping: Mapping[int, int]) -> "NodePoset":
        return NodePoset(frozenset(mapping[u] for u in self.members),
                         frozenset((mapping[u], mapping[v]) for u, v in self.relation))

    def __repr__(self):
        if self.is_set:
            return f"NodePoset({sorted(self.members)})"
        return f"NodePoset({sorted(self.members)}, {self.strict_pairs()})"


def as_poset(s) -> NodePoset:
    if isinstance(s, NodePoset):
        return s
    return NodePoset.of_set(s)


def transitive_closure(pairs: Iterable[Sequence[int]], members: Iterable[int] = ()) -> frozenset:
    rel = {tuple(p) for p in pairs} | {(u, u) for u in members}
    changed = True
    while changed:
        changed = False
        for u, v in list(rel):
            for x, w in list(rel):
                if v == x and (u, w) not in rel:
                    rel.add((u, w))
                    changed = True
    return frozenset(rel)


@dataclass(frozen=True)
class Permutation:
    """Bijection on ``1..n``; ``mapping[i - 1]`` is the image of ``i``."""

    mapping: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.mapping)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise GraphError(f"{m} is not a permutation of 1..{len(m)}")
        object.__setattr__(self, "mapping", m)

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, pi in enumerate(self.mapping, start=1):
            inv[pi - 1] = i
        return Permutation(tuple(inv))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "Permutation":
        m = list(range(1, n + 1))
        rng.shuffle(m)
        return cls(tuple(m))

    def as_dict(self) -> dict:
        return {i: self(i) for i in range(1, self.n + 1)}


def apply_permutation(g: Graph, p: Permutation) -> Graph:
    """Move node ``i`` to ``p(i)`` together with its features and edges."""
    if p.n != g.n:
        raise GraphError(f"permutation acts on {p.n} nodes, graph has {g.n}")
    nf = [None] * g.n
    for i in g.nodes:
        nf[p(i) - 1] = g.node_features[i - 1]
    edges = frozenset((p(i), p(j)) for i, j in g.edges)
    feats = {(p(i), p(j)): f for (i, j), f in g.edge_features.items()}
    return Graph(g.n, edges, g.directed, tuple(nf), feats)


def permute_poset(s: NodePoset, p: Permutation) -> NodePoset:
    return s.relabel(p.as_dict())


def hasse_diagram(s: NodePoset) -> tuple[Graph, list]:
    """Directed cover graph of ``s``.

    Returns the diagram on nodes ``1..|U|`` and the sorted member list that
    gives the node order (diagram node ``k`` is ``members[k - 1]``).
    """
    s.validate()
    members = sorted(s.members)
    index = {u: k + 1 for k, u in enumerate(members)}
    strict = [(u, v) for u, v in s.relation if u != v]
    edges = set()
    for u, v in strict:
        if not any(s.leq(u, w) and s.leq(w, v) for w in members if w not in (u, v)):
            edges.add((index[u], index[v]))
    return Graph(len(members), frozenset(edges), directed=True), members


def bfs_distances(g: Graph, source: int, blocked: int | None = None,
                  reverse: bool = False) -> dict:
    """Hop distances from ``source``; ``blocked`` is removed with its edges."""
    adj = g.in_adj if reverse else g.out_adj
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v != blocked and v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def undirected_view(g: Graph) -> Graph:
    if not g.directed:
        return g
    edges = set(g.edges) | {(j, i) for i, j in g.edges}
    return Graph(g.n, frozenset(edges), False, g.node_features)


def enclosing_subgraph(g: Graph, s, h: float) -> tuple[Graph, NodePoset, dict]:
    """Subgraph induced by nodes within ``h`` hops of any member of ``s``.

    Distances ignore edge direction.  Returns the subgraph, ``s`` re-indexed
    into it, and the old -> new node map.
    """
    s = as_poset(s)
    for u in s.members:
        if not 1 <= u <= g.n:
            raise GraphError(f"target node {u} is not in the graph")
    if h == INF or h is None:
        return g, s, {i: i for i in g.nodes}
    if h < 0:
        raise GraphError("hop count must be non-negative")
    ug = undirected_view(g)
    keep = set(s.members)
    frontier = set(s.members)
    for _ in range(int(h)):
        nxt = set()
        for u in frontier:
            nxt.update(ug.out_adj[u])
        frontier = nxt - keep
        keep |= frontier
        if not frontier:
            break
    sub, index = g.induced_subgraph(keep)
    return sub, s.relabel(index), index


@dataclass(frozen=True)
class Hypergraph:
    """Hypergraph given by an ``n x m`` 0/1 incidence matrix (row tuples)."""

    n_nodes: int
    incidence: tuple
    node_features: tuple = ()
    hyperedge_features: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.incidence)
        if len(rows) != self.n_nodes:
            raise GraphError(f"incidence matrix has {len(rows)} rows, expected {self.n_nodes}")
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise GraphError("incidence matrix rows differ in length")
        if any(x not in (0, 1) for r in rows for x in r):
            raise GraphError("incidence matrix entries must be 0 or 1")
        for j in range(m):
            if not any(r[j] for r in rows):
                raise GraphError(f"hyperedge {j + 1} has no member node")
        nf = tuple(_feature(f) for f in self.node_features) or ((),) * self.n_nodes
        ef = tuple(_feature(f) for f in self.hyperedge_features) or ((),) * m
        if len(nf) != self.n_nodes or len(ef) != m:
            raise GraphError("feature row counts do not match the incidence matrix")
        if len({len(f) for f in nf + ef}) > 1:
            raise GraphError("node and hyperedge features must share one dimension")
        object.__setattr__(self, "incidence", rows)
        object.__setattr__(self, "node_features", nf)
        object.__setattr__(self, "hyperedge_features", ef)

    @property
    def n_hyperedges(self) -> int:
        return len(self.incidence[0]) if self.incidence else 0

    @classmethod
    def from_hyperedges(cls, n: int, hyperedges: Sequence[Iterable[int]], **kw) -> "Hypergraph":
        hyperedges = [set(e) for e in hyperedges]
        for e in hyperedges:
            for v in e:
                if not 1 <= v <= n:
                    raise GraphError(f"hyperedge member {v} outside 1..{n}")
        rows = tuple(tuple(int(i in e) for e in hyperedges) for i in range(1, n + 1))
        if n == 0 and hyperedges:
            raise GraphError("hyperedges need member nodes")
        return cls(n, rows, **kw)

    def hyperedges(self) -> list:
        return [frozenset(i + 1 for i in range(self.n_nodes) if self.incidence[i][j])
                for j in range(self.n_hyperedges)]

    def permute(self, p_nodes: Permutation, p_edges: Permutation) -> "Hypergraph":
        n, m = self.n_nodes, self.n_hyperedges
        rows = [[0] * m for _ in range(n)]
        for i in range(n):
            for j in range(m):
                rows[p_nodes(i + 1) - 1][p_edges(j + 1) - 1] = self.incidence[i][j]
        nf = [None] * n
        for i in range(n):
            nf[p_nodes(i + 1) - 1] = self.node_features[i]
        ef = [None] * m
        for j in range(m):
            ef[p_edges(j + 1) - 1] = self.hyperedge_features[j]
        return Hypergraph(n, tuple(map(tuple, rows)), tuple(nf), tuple(ef))


def incidence_graph(h: Hypergraph) -> Graph:
    """Bipartite node/hyperedge graph with a trailing origin flag.

    Node ``i`` keeps its features plus flag 1; hyperedge ``j`` becomes node
    ``n + j`` carrying its features plus flag 0.
    """
    n, m = h.n_nodes, h.n_hyperedges
    edges = set()
    for i in range(n):
        for j in range(m):
            if h.incidence[i][j]:
                edges.add((i + 1, n + j + 1))
    nf = [f + (1,) for f in h.node_features] + [f + (0,) for f in h.hyperedge_features]
    return Graph(n + m, frozenset(edges), False, tuple(nf))


# -- small graph constructors ---------------------------------------------

def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int, directed: bool = False) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)], directed)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(1, n + 1), 2))


def star_graph(leaves: int) -> Graph:
    """``K_{1,leaves}`` with centre node 1."""
    return Graph.from_edges(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def disjoint_union(*graphs: Graph) -> Graph:
    if len({g.directed for g in graphs}) > 1:
        raise GraphError("cannot mix directed and undirected graphs")
    off = 0
    edges, feats, nf = set(), {}, []
    for g in graphs:
        for (i, j), f in g.edge_features.items():
            edges.add((i + off, j + off))
            feats[(i + off, j + off)] = f
        nf.extend(g.node_features)
        off += g.n
    return Graph(off, frozenset(edges), graphs[0].directed if graphs else False, tuple(nf), feats)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return len(bfs_distances(undirected_view(g), 1)) == g.n


def random_graph(n: int, p: float, rng: random.Random, directed: bool = False) -> Graph:
    pairs = ([(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j] if directed
             else list(combinations(range(1, n + 1), 2)))
    return Graph.from_edges(n, [e for e in pairs if rng.random() < p], directed)


def random_bounded_degree_graph(n: int, max_degree: int, rng: random.Random,
                                attempts_per_node: int = 4) -> Graph:
    """Random graph with every degree in ``1..max_degree``.

    Nodes are paired at random while both have spare degree; any node left
    isolated is then attached to a random node with spare capacity.
    """
    deg = [0] * (n + 1)
    edges = set()
    for _ in range(attempts_per_node * n):
        i, j = rng.randint(1, n), rng.randint(1, n)
        if i == j or (min(i, j), max(i, j)) in edges:
            continue
        if deg[i] < max_degree and deg[j] < max_degree:
            edges.add((min(i, j), max(i, j)))
            deg[i] += 1
            deg[j] += 1
    for i in range(1, n + 1):
        if deg[i] == 0:
            spare = [j for j in range(1, n + 1) if j != i and deg[j] < max_degree]
            j = rng.choice(spare)
            edges.add((min(i, j), max(i, j)))
            deg[i] += 1
            deg[j] += 1
    return Graph.from_edges(n, edges)


def watts_strogatz_graph(n: int, k: int, p: float, rng: random.Random) -> Graph:
    """Ring lattice with ``k`` nearest neighbours, each edge rewired with prob ``p``."""
    edges = set()
    for i in range(n):
        for step in range(1, k // 2 + 1):
            j = (i + step) % n
            edges.add((min(i, j), max(i, j)))
    for i in range(n):
        for step in range(1, k // 2 + 1):
            j = (i + step) % n
            e = (min(i, j), max(i, j))
            if e in edges and rng.random() < p:
                candidates = [w for w in range(n) if w != i and (min(i, w), max(i, w)) not in edges]
                if candidates:
                    w = rng.choice(candidates)
                    edges.discard(e)
                    edges.add((min(i, w), max(i, w)))
    return Graph.from_edges(n, [(i + 1, j + 1) for i, j in edges])
