"""Exact isomorphism oracles for marked graphs and hypergraphs.

Both routes are exhaustive over permutations and therefore limited to small
graphs; above ``MAX_ORACLE_NODES`` they raise :class:`OracleUnavailable`
instead of guessing.

* :func:`are_substructures_isomorphic` tries every permutation directly.
* :func:`canonical_code` takes the lexicographically least serialization
  over all permutations that respect an isomorphism-invariant vertex
  ordering, so equal codes mean isomorphic inputs.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Sequence

import numpy as np

from .graph import Graph, Hypergraph, NodePoset, as_poset

MAX_ORACLE_NODES = 8


class OracleUnavailable(RuntimeError):
    """The exhaustive oracle refuses inputs above its size bound."""


def _check_bound(n: int, bound: int | None) -> None:
    bound = MAX_ORACLE_NODES if bound is None else bound
    if n > bound:
        raise OracleUnavailable(f"oracle unavailable: {n} nodes exceeds the brute-force bound {bound}")


def _raw_cells(g: Graph, s: NodePoset, node_labels=None):
    """Diagonal and off-diagonal keys describing (marking, graph)."""
    diag = []
    for i in g.nodes:
        extra = tuple(node_labels[i - 1]) if node_labels is not None else ()
        diag.append((g.node_features[i - 1], extra, int(i in s.members)))
    off = {}
    for (i, j), f in g.edge_features.items():
        off[(i, j)] = (1, f, 0)
    for u, v in s.relation:
        if u != v:
            key = off.get((u, v), (0, (), 0))
            off[(u, v)] = (key[0], key[1], 1)
    return diag, off


def _encode(g: Graph, s: NodePoset, diag_table: dict, off_table: dict, node_labels=None) -> np.ndarray:
    diag, off = _raw_cells(g, s, node_labels)
    m = np.zeros((g.n, g.n), dtype=np.int64)
    for i, key in enumerate(diag):
        m[i, i] = diag_table[key]
    for (i, j), key in off.items():
        m[i - 1, j - 1] = off_table[key]
    return m


def _tables(*items) -> tuple[dict, dict]:
    diag_keys, off_keys = set(), set()
    for g, s, labels in items:
        d, o = _raw_cells(g, s, labels)
        diag_keys.update(d)
        off_keys.update(o.values())
    diag_table = {k: r for r, k in enumerate(sorted(diag_keys, key=repr))}
    off_table = {k: r + 1 for r, k in enumerate(sorted(off_keys, key=repr))}
    return diag_table, off_table


@lru_cache(maxsize=None)
def _all_perms(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.intp).reshape(-1, n)


def are_substructures_isomorphic(s1, g1: Graph, s2, g2: Graph, *, labels1=None, labels2=None,
                                 bound: int | None = None) -> bool:
    """True iff some permutation maps ``(s2, g2)`` onto ``(s1, g1)``.

    ``labels1``/``labels2`` are optional per-node label vectors that must be
    preserved as well (used to compare labeled graphs).
    """
    s1, s2 = as_poset(s1), as_poset(s2)
    if g1.n != g2.n or g1.directed != g2.directed:
        return False
    if len(s1.members) != len(s2.members) or len(s1.relation) != len(s2.relation):
        return False
    if g1.num_edges != g2.num_edges:
        return False
    _check_bound(g1.n, bound)
    diag_t, off_t = _tables((g1, s1, labels1), (g2, s2, labels2))
    m1 = _encode(g1, s1, diag_t, off_t, labels1)
    m2 = _encode(g2, s2, diag_t, off_t, labels2)
    n = g1.n
    if n == 0:
        return True
    if sorted(np.diag(m1)) != sorted(np.diag(m2)):
        return False
    if sorted(map(tuple, np.sort(m1, axis=1))) != sorted(map(tuple, np.sort(m2, axis=1))):
        return False
    perms = _all_perms(n)
    # m2 permuted by sigma: row/col k of the result is node sigma[k] of g2
    d1 = np.diag(m1)
    d2 = np.diag(m2)
    ok = np.all(d2[perms] == d1[None, :], axis=1)
    perms = perms[ok]
    if len(perms) == 0:
        return False
    for chunk in range(0, len(perms), 8192):
        p = perms[chunk:chunk + 8192]
        permuted = m2[p[:, :, None], p[:, None, :]]
        if np.any(np.all(permuted == m1[None], axis=(1, 2))):
            return True
    return False


def _refine_cells(m: np.ndarray) -> list:
    """Invariant ordered partition of the vertices of the encoded matrix."""
    n = m.shape[0]
    colors = list(np.diag(m))
    count = len(set(colors))
    while True:
        sigs = []
        for i in range(n):
            out = sorted((int(m[i, j]), colors[j]) for j in range(n) if j != i and m[i, j])
            inc = sorted((int(m[j, i]), colors[j]) for j in range(n) if j != i and m[j, i])
            sigs.append((colors[i], tuple(out), tuple(inc)))
        table = {sig: k for k, sig in enumerate(sorted(set(sigs)))}
        colors = [table[s] for s in sigs]
        if len(table) == count:
            break
        count = len(table)
    cells = {}
    for i, c in enumerate(colors):
        cells.setdefault(c, []).append(i)
    return [cells[c] for c in sorted(cells)]


def _cell_permutations(cells: Sequence[Sequence[int]]) -> np.ndarray:
    per_cell = [list(permutations(c)) for c in cells]
    rows = [sum(choice, ()) for choice in product(*per_cell)]
    return np.array(rows, dtype=np.intp)


def _lexmin_rows(a: np.ndarray) -> np.ndarray:
    cand = np.arange(a.shape[0])
    for col in range(a.shape[1]):
        vals = a[cand, col]
        cand = cand[vals == vals.min()]
        if len(cand) == 1:
            break
    return a[cand[0]]


def canonical_code(s, g: Graph, *, labels=None, bound: int | None = None) -> bytes:
    """Byte string identifying the isomorphism class of ``(s, g)``.

    ``labels`` optionally adds per-node label vectors to the node features.
    """
    s = as_poset(s)
    _check_bound(g.n, bound)
    diag_t, off_t = _tables((g, s, labels))
    m = _encode(g, s, diag_t, off_t, labels)
    if g.n:
        perms = _cell_permutations(_refine_cells(m))
        flat = m[perms[:, :, None], perms[:, None, :]].reshape(len(perms), -1)
        best = _lexmin_rows(flat).tolist()
    else:
        best = []
    header = (g.n, int(g.directed), sorted(map(repr, diag_t)), sorted(map(repr, off_t)))
    return repr((header, best)).encode()


def node_codes(g: Graph, nodes: Sequence[int], *, labels=None, bound: int | None = None) -> list:
    """Canonical code of each single node ``({i}, g)``."""
    return [canonical_code(NodePoset.of_set([i]), g, labels=labels, bound=bound) for i in nodes]


# -- hypergraphs ------------------------------------------------------------

def _hyper_key(h: Hypergraph, s: NodePoset):
    return (h.n_nodes, h.n_hyperedges, len(s.members), len(s.relation))


def are_hypergraphs_isomorphic(s1, h1: Hypergraph, s2, h2: Hypergraph) -> bool:
    """Brute force over node and hyperedge permutations jointly."""
    s1, s2 = as_poset(s1), as_poset(s2)
    if _hyper_key(h1, s1) != _hyper_key(h2, s2):
        return False
    n, m = h1.n_nodes, h1.n_hyperedges
    _check_bound(n + m, None)
    inc1 = np.array(h1.incidence, dtype=np.int8).reshape(n, m)
    inc2 = np.array(h2.incidence, dtype=np.int8).reshape(n, m)
    for p1 in permutations(range(n)):
        # p1[i]: node i of h2 goes to node p1[i] of h1
        if any(h2.node_features[i] != h1.node_features[p1[i]] for i in range(n)):
            continue
        mapped = {(p1[u - 1] + 1, p1[v - 1] + 1) for u, v in s2.relation}
        if mapped != set(s1.relation):
            continue
        if {p1[u - 1] + 1 for u in s2.members} != set(s1.members):
            continue
        rows = np.empty_like(inc2)
        rows[list(p1)] = inc2
        for p2 in permutations(range(m)):
            if any(h2.hyperedge_features[j] != h1.hyperedge_features[p2[j]] for j in range(m)):
                continue
            cols = np.empty_like(rows)
            cols[:, list(p2)] = rows
            if np.array_equal(cols, inc1):
                return True
    return False


def hypergraph_canonical_code(s, h: Hypergraph) -> bytes:
    """Least serialization over all node and hyperedge permutations.

    The serialization lists node keys (features, membership), the strict
    order, hyperedge features and the incidence matrix, all in permuted order.
    """
    s = as_poset(s)
    n, m = h.n_nodes, h.n_hyperedges
    _check_bound(n + m, None)
    node_keys = [(h.node_features[i], int(i + 1 in s.members)) for i in range(n)]
    edge_keys = list(h.hyperedge_features)
    ntab = {k: r for r, k in enumerate(sorted(set(node_keys), key=repr))}
    etab = {k: r for r, k in enumerate(sorted(set(edge_keys), key=repr))}
    nd = np.array([ntab[k] for k in node_keys], dtype=np.int64)
    ed = np.array([etab[k] for k in edge_keys], dtype=np.int64)
    rel = np.zeros((n, n), dtype=np.int64)
    for u, v in s.relation:
        if u != v:
            rel[u - 1, v - 1] = 1
    inc = np.array(h.incidence, dtype=np.int64).reshape(n, m)
    p1 = _all_perms(n)              # row k of a permuted object is original node p1[k]
    p2 = _all_perms(m)
    head = np.concatenate([nd[p1], rel[p1[:, :, None], p1[:, None, :]].reshape(len(p1), -1)], axis=1)
    best = None
    for q in p2:
        body = inc[p1][:, :, q].reshape(len(p1), -1)
        rows = np.concatenate([head, np.broadcast_to(ed[q], (len(p1), m)), body], axis=1)
        cand = _lexmin_rows(rows).tolist()
        if best is None or cand < best:
            best = cand
    header = (n, m, sorted(map(repr, ntab)), sorted(map(repr, etab)))
    return repr((header, best or [])).encode()


def marked_digraph_type(g: Graph, node: int, *, bound: int | None = None) -> int:
    """Exact positive integer naming the isomorphism type of ``(node, g)``.

    Only node marking and adjacency are used (features are ignored), which is
    what Hasse diagrams need.  The integer is the least adjacency-plus-mark
    bit string over all vertex orders, with a leading 1 bit so that the
    length, and hence ``n``, is recoverable.
    """
    _check_bound(g.n, bound)
    m = np.zeros((g.n, g.n), dtype=np.int64)
    for i, j in g.edges:
        m[i - 1, j - 1] = 1
    m[node - 1, node - 1] = 1
    perms = _cell_permutations(_refine_cells(m))
    flat = m[perms[:, :, None], perms[:, None, :]].reshape(len(perms), -1)
    bits = "".join(str(int(b)) for b in _lexmin_rows(flat))
    return int("1" + bits, 2)
