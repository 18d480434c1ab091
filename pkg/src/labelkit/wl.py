"""Weisfeiler-Lehman colour refinement: 1-WL, k-WL, pooled k-WL and k,l-WL.

Colour ids are dense integers taken from a sorted table of that round's
signatures, computed over every graph refined together.  Colours are only
comparable between graphs that were refined in the same batch, so every
cross-graph question here refines its inputs jointly.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .graph import Graph, GraphError, NodePoset, as_poset

DEFAULT_LAYERS = 3
CONVERGE = "converge"

# n limits per k for tuple refinement
KWL_BUDGET = {1: 64, 2: 10, 3: 7}
KL_WL_MAX_NODES = 8


class BudgetExceeded(RuntimeError):
    """Raised when tuple refinement would exceed its configured size budget."""


@dataclass
class Coloring:
    """Per-round node colours of one graph; ``colors[i - 1]`` is node ``i``."""

    colors: tuple
    rounds: list = field(default_factory=list)
    converged: bool = False

    def color(self, node: int) -> int:
        return self.colors[node - 1]

    def histogram(self) -> Counter:
        return Counter(self.colors)

    def num_classes(self) -> int:
        return len(set(self.colors))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "round", "color"])
        for t, row in enumerate(self.rounds):
            for i, c in enumerate(row, start=1):
                w.writerow([i, t, c])
        return buf.getvalue()

    def report(self) -> dict:
        return {"rounds": len(self.rounds) - 1, "converged": self.converged,
                "num_classes": self.num_classes(),
                "histogram": {str(c): k for c, k in sorted(self.histogram().items())}}

    def to_json(self) -> str:
        return json.dumps(self.report(), indent=2, sort_keys=True)


def _as_label_rows(g: Graph, init) -> list:
    if init is None:
        return [()] * g.n
    rows = getattr(init, "labels", init)
    if len(rows) != g.n:
        raise GraphError(f"labeling covers {len(rows)} nodes, graph has {g.n}")
    return [tuple(r) if isinstance(r, (tuple, list)) else (r,) for r in rows]


def _dense(signatures: list) -> dict:
    return {sig: k for k, sig in enumerate(sorted(set(signatures)))}


class _Prepared:
    """Neighbour lists with edge features mapped to small ints."""

    __slots__ = ("n", "ins", "outs", "directed")

    def __init__(self, g: Graph, efeat_ids: dict):
        self.n = g.n
        self.directed = g.directed
        self.outs = [[(j - 1, efeat_ids[g.edge_features[(i, j)]]) for j in g.out_adj[i]]
                     for i in range(1, g.n + 1)]
        self.ins = ([[(j - 1, efeat_ids[g.edge_features[(j, i)]]) for j in g.in_adj[i]]
                     for i in range(1, g.n + 1)] if g.directed else None)

    def signatures(self, colors: list) -> list:
        if self.directed:
            return [(colors[i],
                     tuple(sorted((colors[j], e) for j, e in self.ins[i])),
                     tuple(sorted((colors[j], e) for j, e in self.outs[i])))
                    for i in range(self.n)]
        return [(colors[i], tuple(sorted((colors[j], e) for j, e in self.outs[i])))
                for i in range(self.n)]


def _edge_feature_ids(graphs: Sequence[Graph]) -> dict:
    feats = set()
    for g in graphs:
        feats.update(g.edge_features.values())
    return {f: k for k, f in enumerate(sorted(feats))}


def refine_batch(graphs: Sequence[Graph], inits: Sequence | None = None,
                 layers=CONVERGE) -> list[Coloring]:
    """Jointly refine several graphs; colours are comparable across the batch.

    ``layers`` is a round count or ``"converge"``.  Refinement stops early once
    the number of colour classes over the whole batch stops growing.
    """
    graphs = list(graphs)
    inits = list(inits) if inits is not None else [None] * len(graphs)
    if layers is None:
        layers = DEFAULT_LAYERS
    limit = None if layers == CONVERGE else int(layers)
    eids = _edge_feature_ids(graphs)
    prepared = [_Prepared(g, eids) for g in graphs]
    sig0 = [[(g.node_features[i], lab[i]) for i in range(g.n)]
            for g, lab in ((g, _as_label_rows(g, init)) for g, init in zip(graphs, inits))]
    table = _dense([s for sigs in sig0 for s in sigs])
    current = [[table[s] for s in sigs] for sigs in sig0]
    history = [[tuple(c)] for c in current]
    count = len(table)
    converged = False
    t = 0
    while limit is None or t < limit:
        sigs = [p.signatures(c) for p, c in zip(prepared, current)]
        table = _dense([s for ss in sigs for s in ss])
        new = [[table[s] for s in ss] for ss in sigs]
        t += 1
        if len(table) == count:
            converged = True
            if limit is not None:
                current = new
                for h, c in zip(history, current):
                    h.append(tuple(c))
            break
        count = len(table)
        current = new
        for h, c in zip(history, current):
            h.append(tuple(c))
    return [Coloring(tuple(c), h, converged) for c, h in zip(current, history)]


def wl_refine(g: Graph, init=None, layers=CONVERGE) -> Coloring:
    """1-WL colours of ``g`` from node features plus optional initial labels."""
    return refine_batch([g], [init], layers)[0]


def wl_distinguishes(g1: Graph, l1, s1, g2: Graph, l2, s2, layers=CONVERGE) -> bool:
    """Whether joint refinement gives the two target sets different colour multisets."""
    s1, s2 = as_poset(s1), as_poset(s2)
    c1, c2 = refine_batch([g1, g2], [l1, l2], layers)
    m1 = sorted(c1.color(u) for u in s1.members)
    m2 = sorted(c2.color(u) for u in s2.members)
    return m1 != m2


def wl_graph_distinguishes(g1: Graph, l1, g2: Graph, l2, layers=CONVERGE) -> bool:
    """Whether joint refinement gives the two (labeled) graphs different histograms."""
    c1, c2 = refine_batch([g1, g2], [l1, l2], layers)
    return g1.n != g2.n or c1.histogram() != c2.histogram()


class ColorInterner:
    """Signature -> id table shared by many independent refinements.

    Each round's new signatures receive ids in sorted order.  Unlike
    :func:`refine_batch` the graphs do not need to be known up front, which
    suits streaming over many small subgraphs with a fixed number of rounds.
    """

    def __init__(self):
        self.table: dict = {}
        self.frozen = False

    def __len__(self):
        return len(self.table)

    def get(self, sig) -> int:
        cid = self.table.get(sig)
        if cid is None:
            if self.frozen:
                return -1
            cid = len(self.table)
            self.table[sig] = cid
        return cid

    def refine(self, g: Graph, init=None, rounds: int = DEFAULT_LAYERS) -> list:
        """Colour rows for rounds ``0..rounds`` (no early stop)."""
        labels = _as_label_rows(g, init)
        outs = [[(j - 1, g.edge_features[(i, j)]) for j in g.out_adj[i]] for i in g.nodes]
        ins = ([[(j - 1, g.edge_features[(j, i)]) for j in g.in_adj[i]] for i in g.nodes]
               if g.directed else None)
        cur = self._intern([(0, g.node_features[i], labels[i]) for i in range(g.n)])
        hist = [cur]
        for t in range(1, rounds + 1):
            if g.directed:
                sigs = [(t, cur[i], tuple(sorted((cur[j], e) for j, e in ins[i])),
                         tuple(sorted((cur[j], e) for j, e in outs[i]))) for i in range(g.n)]
            else:
                sigs = [(t, cur[i], tuple(sorted((cur[j], e) for j, e in outs[i])))
                        for i in range(g.n)]
            cur = self._intern(sigs)
            hist.append(cur)
        return hist

    def _intern(self, sigs: list) -> list:
        # new signatures get ids in sorted order, so ids never depend on node numbering
        for s in sorted(set(sigs)):
            self.get(s)
        return [self.get(s) for s in sigs]


# -- k-WL ---------------------------------------------------------------------

def _check_kwl_budget(n: int, k: int, budget: dict | None = None) -> None:
    budget = budget or KWL_BUDGET
    if k not in budget:
        raise BudgetExceeded(f"k={k} is not supported (choose from {sorted(budget)})")
    if n > budget[k]:
        raise BudgetExceeded(f"{k}-WL on {n} nodes exceeds the budget of {budget[k]} nodes")


def _tuple_type(g: Graph, labels: list, t: tuple):
    k = len(t)
    eq = tuple(t[a] == t[b] for a in range(k) for b in range(a + 1, k))
    nodes = tuple((g.node_features[v], labels[v]) for v in t)
    adj = tuple((g.has_edge(t[a] + 1, t[b] + 1), g.edge_features.get((t[a] + 1, t[b] + 1), ()))
                for a in range(k) for b in range(k) if a != b)
    return (eq, nodes, adj)


@dataclass
class TupleColoring:
    """k-WL colours as an array indexed by 0-based node tuples."""

    k: int
    array: np.ndarray
    rounds: int
    converged: bool

    def color(self, t: Sequence[int]) -> int:
        return int(self.array[tuple(v - 1 for v in t)])

    def histogram(self) -> Counter:
        return Counter(self.array.ravel().tolist())

    @property
    def colors(self) -> dict:
        n = self.array.shape[0] if self.array.ndim else 0
        return {tuple(v + 1 for v in t): int(self.array[t]) for t in product(range(n), repeat=self.k)}


def _kwl_rows(c: np.ndarray, k: int, n_max: int) -> np.ndarray:
    n = c.shape[0]
    parts = [c.reshape(-1, 1)]
    for i in range(k):
        s = np.sort(c, axis=i)
        fib = np.moveaxis(s, i, -1)                  # (n,)*(k-1) + (n,)
        fib = np.expand_dims(fib, axis=i)            # insert the replaced position
        fib = np.broadcast_to(fib, (n,) * k + (n,)).reshape(-1, n)
        if n < n_max:
            fib = np.concatenate([fib, np.full((fib.shape[0], n_max - n), -1)], axis=1)
        parts.append(fib)
    return np.concatenate(parts, axis=1)


def kwl_batch(graphs: Sequence[Graph], k: int, labels: Sequence | None = None,
              budget: dict | None = None, max_rounds: int | None = None) -> list[TupleColoring]:
    """Joint k-WL refinement over ``V^k`` for each graph, until the partition is stable."""
    graphs = list(graphs)
    labels = list(labels) if labels is not None else [None] * len(graphs)
    for g in graphs:
        _check_kwl_budget(g.n, k, budget)
    types = []
    for g, lab in zip(graphs, labels):
        rows = _as_label_rows(g, lab)
        types.append([_tuple_type(g, rows, t) for t in product(range(g.n), repeat=k)])
    table = _dense([ty for tys in types for ty in tys])
    arrays = [np.array([table[ty] for ty in tys], dtype=np.int64).reshape((g.n,) * k)
              for g, tys in zip(graphs, types)]
    count = len(table)
    n_max = max((g.n for g in graphs), default=0)
    rounds, converged = 0, False
    while max_rounds is None or rounds < max_rounds:
        rows = [_kwl_rows(a, k, n_max) for a in arrays]
        if not rows or sum(len(r) for r in rows) == 0:
            converged = True
            break
        stacked = np.concatenate(rows, axis=0)
        _, inverse = np.unique(stacked, axis=0, return_inverse=True)
        inverse = inverse.ravel()
        new, off = [], 0
        for g, r in zip(graphs, rows):
            new.append(inverse[off:off + len(r)].reshape((g.n,) * k))
            off += len(r)
        rounds += 1
        n_classes = int(inverse.max()) + 1
        arrays = new
        if n_classes == count:
            converged = True
            break
        count = n_classes
    return [TupleColoring(k, a, rounds, converged) for a in arrays]


def kwl_refine(g: Graph, k: int, labels=None, budget: dict | None = None) -> TupleColoring:
    return kwl_batch([g], k, [labels], budget)[0]


def kwl_graph_colors(graphs: Sequence[Graph], k: int, labels: Sequence | None = None,
                     budget: dict | None = None) -> list:
    """Graph colour of each graph: dense id of its tuple-colour multiset."""
    colorings = kwl_batch(graphs, k, labels, budget)
    hists = [tuple(sorted(c.array.ravel().tolist())) for c in colorings]
    table = _dense(hists)
    return [table[h] for h in hists]


def _pool(array: np.ndarray, k: int, l: int) -> np.ndarray:
    n = array.shape[0]
    flat = array.reshape(n ** l, n ** (k - l))
    return np.sort(flat, axis=1)


def kwl_l_pooling_batch(graphs: Sequence[Graph], k: int, l: int, labels=None,
                        budget: dict | None = None) -> tuple[list, list]:
    """Pooled l-tuple colours and pooled graph colours for each graph.

    The colour of an l-tuple is the multiset of the k-WL colours of all its
    k-tuple extensions; the graph colour is the multiset of l-tuple colours.
    """
    if not 0 <= l < k:
        raise ValueError("pooling needs 0 <= l < k")
    colorings = kwl_batch(graphs, k, labels, budget)
    pooled = [_pool(c.array, k, l) for c in colorings]
    width = max((p.shape[1] for p in pooled), default=0)
    rows = [tuple(r) + (-1,) * (width - len(r)) for p in pooled for r in p.tolist()]
    table = _dense(rows)
    tuple_colors, off = [], 0
    for g, p in zip(graphs, pooled):
        ids = [table[r] for r in rows[off:off + len(p)]]
        off += len(p)
        tuple_colors.append(np.array(ids, dtype=np.int64).reshape((g.n,) * l))
    hists = [tuple(sorted(tc.ravel().tolist())) for tc in tuple_colors]
    gtable = _dense(hists)
    return tuple_colors, [gtable[h] for h in hists]


def kwl_l_pooling(g: Graph, k: int, l: int, labels=None, budget: dict | None = None) -> np.ndarray:
    return kwl_l_pooling_batch([g], k, l, [labels], budget)[0][0]


def tuple_labels(g: Graph, t: Sequence[int], base=None) -> list:
    """Node labels marking each node with the positions it takes in ``t`` (1-based)."""
    base_rows = _as_label_rows(g, base)
    out = []
    for v in g.nodes:
        pos = tuple(i + 1 for i, u in enumerate(t) if u == v)
        out.append(base_rows[v - 1] + (pos,))
    return out


def kl_wl_batch(graphs: Sequence[Graph], k: int, l: int, tuples: Sequence | None = None,
                budget: dict | None = None) -> tuple[list, list]:
    """k,l-WL over several graphs.

    For every l-tuple (or the given ``tuples[g]`` list per graph), run k-WL
    on the graph with tuple positions added as node labels.  Returns per-graph
    dicts ``tuple -> colour`` and per-graph colours of the tuple multisets,
    all comparable across the batch.
    """
    if k not in (2, 3) or l not in (1, 2):
        raise BudgetExceeded("k,l-WL supports k in {2, 3} and l in {1, 2}")
    for g in graphs:
        if g.n > KL_WL_MAX_NODES:
            raise BudgetExceeded(f"k,l-WL on {g.n} nodes exceeds the budget of {KL_WL_MAX_NODES}")
    jobs, owners = [], []
    for gi, g in enumerate(graphs):
        ts = (tuples[gi] if tuples is not None and tuples[gi] is not None
              else list(product(g.nodes, repeat=l)))
        for t in ts:
            jobs.append((g, tuple(t)))
            owners.append(gi)
    colors = kwl_graph_colors([g for g, _ in jobs], k, [tuple_labels(g, t) for g, t in jobs],
                              budget={k: KL_WL_MAX_NODES})
    per_graph = [dict() for _ in graphs]
    for (g, t), gi, c in zip(jobs, owners, colors):
        per_graph[gi][t] = c
    hists = [tuple(sorted(d.values())) for d in per_graph]
    table = _dense(hists)
    return per_graph, [table[h] for h in hists]


def kl_wl(g: Graph, k: int, l: int, s="all", budget: dict | None = None):
    """Tuple colour of ``s`` (an l-tuple) or, with ``s="all"``, the graph colour."""
    if s == "all":
        per, gc = kl_wl_batch([g], k, l, budget=budget)
        return per[0], gc[0]
    per, _ = kl_wl_batch([g], k, l, [[tuple(s)]], budget=budget)
    return per[0][tuple(s)]
