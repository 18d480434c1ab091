"""File formats: edge lists, graph/hypergraph JSON, and target strings.

Edge list
    One edge ``u v`` per line, whitespace separated.  ``#`` starts a comment.
    A line holding a single index declares an (possibly isolated) node.
    Indices are 1-based unless ``one_based=False``.

Graph JSON
    ``{"n": 3, "directed": false, "edges": [[1, 2], [2, 3]]}`` with optional
    ``"node_features"`` (list of lists) and ``"edge_features"``
    (list of ``[u, v, [f...]]``).

Hypergraph JSON
    ``{"n": 3, "hyperedges": [[1, 2], [1, 2, 3]]}`` with optional
    ``"node_features"`` and ``"hyperedge_features"``.

Targets
    Sets are comma lists (``"1,2,5"``); posets are relation strings
    (``"1<2,2<3"``), reflexive and transitive closure implied.  A poset string
    may mention a lone member without relations (``"1<2,4"``).
"""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path

from .graph import Graph, GraphError, Hypergraph, NodePoset

log = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Malformed input file; the message names the offending line when there is one."""


# -- dict round-trips ------------------------------------------------------------

def graph_to_dict(g: Graph) -> dict:
    edges = sorted(g.edges) if g.directed else sorted(g.undirected_edges())
    out = {"n": g.n, "directed": g.directed, "edges": [list(e) for e in edges]}
    if g.node_dim:
        out["node_features"] = [list(f) for f in g.node_features]
    if any(any(f) for f in g.edge_features.values()):
        out["edge_features"] = [[u, v, list(g.edge_features[(u, v)])] for u, v in edges]
    return out


def graph_from_dict(d: dict) -> Graph:
    try:
        n = int(d["n"])
        directed = bool(d.get("directed", False))
        edges = [tuple(int(x) for x in e) for e in d.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"graph JSON needs 'n' and a list of 'edges': {exc}") from None
    for k, e in enumerate(edges):
        if len(e) != 2:
            raise GraphFormatError(f"edge #{k + 1} {list(e)} does not have two endpoints")
        for v in e:
            if not 1 <= v <= n:
                raise GraphFormatError(f"edge #{k + 1} {list(e)} names node {v} outside 1..{n}")
    feats = {}
    for row in d.get("edge_features", []):
        u, v, f = row
        feats[(int(u), int(v))] = tuple(f)
    nf = tuple(tuple(f) for f in d.get("node_features", ()))
    try:
        return Graph(n, frozenset(edges), directed, nf, feats)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from None


def poset_to_dict(s: NodePoset) -> dict:
    return {"members": sorted(s.members), "relation": [list(p) for p in s.strict_pairs()]}


def poset_from_dict(d: dict) -> NodePoset:
    return NodePoset.from_pairs([tuple(p) for p in d.get("relation", [])], d.get("members", []))


def hypergraph_to_dict(h: Hypergraph) -> dict:
    out = {"n": h.n_nodes, "hyperedges": [sorted(e) for e in h.hyperedges()]}
    if h.node_features and len(h.node_features[0]):
        out["node_features"] = [list(f) for f in h.node_features]
        out["hyperedge_features"] = [list(f) for f in h.hyperedge_features]
    return out


def hypergraph_from_dict(d: dict) -> Hypergraph:
    try:
        n = int(d["n"])
        hyperedges = [[int(v) for v in e] for e in d["hyperedges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"hypergraph JSON needs 'n' and 'hyperedges': {exc}") from None
    kw = {}
    if "node_features" in d:
        kw["node_features"] = tuple(tuple(f) for f in d["node_features"])
    if "hyperedge_features" in d:
        kw["hyperedge_features"] = tuple(tuple(f) for f in d["hyperedge_features"])
    try:
        return Hypergraph.from_hyperedges(n, hyperedges, **kw)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from None


# -- edge lists ---------------------------------------------------------------------

def parse_edge_list(text: str, *, one_based: bool = True, directed: bool = False,
                    allow_empty: bool = False, n: int | None = None) -> Graph:
    """Parse edge-list text into a :class:`Graph`.

    Duplicate edges (for undirected graphs also ``v u`` after ``u v``) are
    dropped with a warning.
    """
    shift = 0 if one_based else 1
    edges, seen = [], set()
    declared = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) > 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {raw.strip()!r}")
        try:
            idx = [int(p) + shift for p in parts]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: node indices must be integers, "
                                   f"got {raw.strip()!r}") from None
        for p, v in zip(parts, idx):
            if v < 1:
                base = "1" if one_based else "0"
                raise GraphFormatError(f"line {lineno}: node index {p} is below {base}")
            if n is not None and v > n:
                raise GraphFormatError(f"line {lineno}: node index {p} exceeds the declared "
                                       f"node count {n}")
        declared = max(declared, *idx)
        if len(idx) == 1:
            continue
        u, v = idx
        if u == v:
            raise GraphFormatError(f"line {lineno}: self loop on node {parts[0]}")
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            log.warning("line %d: duplicate edge %s %s dropped", lineno, parts[0], parts[1])
            continue
        seen.add(key)
        edges.append((u, v))
    size = n if n is not None else declared
    if size == 0 and not allow_empty:
        raise GraphFormatError("empty graph: no nodes or edges found (pass allow_empty to accept)")
    return Graph.from_edges(size, edges, directed)


def format_edge_list(g: Graph, one_based: bool = True) -> str:
    """Inverse of :func:`parse_edge_list`; isolated nodes get their own line."""
    shift = 0 if one_based else 1
    edges = sorted(g.edges) if g.directed else sorted(g.undirected_edges())
    lines = [f"# n={g.n} directed={str(g.directed).lower()}"]
    touched = {v for e in edges for v in e}
    lines += [f"{u - shift} {v - shift}" for u, v in edges]
    lines += [f"{v - shift}" for v in g.nodes if v not in touched]
    return "\n".join(lines) + "\n"


def parse_graph_file(path, fmt: str | None = None, **kw) -> Graph:
    """Read a graph from ``path``; ``fmt`` is ``"edgelist"``, ``"json"`` or inferred."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "edgelist")
    text = path.read_text()
    if fmt == "json":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        g = graph_from_dict(d)
        if g.n == 0 and not kw.get("allow_empty", False):
            raise GraphFormatError("empty graph: no nodes found (pass allow_empty to accept)")
        return g
    if fmt == "edgelist":
        return parse_edge_list(text, **kw)
    raise GraphFormatError(f"unknown graph format {fmt!r}; use 'edgelist' or 'json'")


def parse_hypergraph_file(path) -> Hypergraph:
    path = Path(path)
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return hypergraph_from_dict(d)


# -- targets ------------------------------------------------------------------------

_REL = re.compile(r"^\s*(\d+)\s*<\s*(\d+)\s*$")


def parse_set(text: str) -> NodePoset:
    try:
        members = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise GraphFormatError(f"target set must be a comma list of node indices, got {text!r}") from None
    if len(set(members)) != len(members):
        raise GraphFormatError(f"target set {text!r} repeats a node")
    return NodePoset.of_set(members)


def parse_poset(text: str) -> NodePoset:
    pairs, members = [], []
    for item in (x for x in text.split(",") if x.strip()):
        m = _REL.match(item)
        if m:
            pairs.append((int(m.group(1)), int(m.group(2))))
        elif item.strip().isdigit():
            members.append(int(item))
        else:
            raise GraphFormatError(f"poset item {item.strip()!r} is neither 'a<b' nor a node index")
    return NodePoset.from_pairs(pairs, members)


def parse_target(text: str) -> NodePoset:
    """Poset if the string contains ``<``, set otherwise."""
    return parse_poset(text) if "<" in text else parse_set(text)
