"""Exhaustive and sampled checks of the expressivity claims at desk scale.

Every audit returns an :class:`AuditResult`.  Counterexamples are stored as
plain JSON-able dicts naming the check that failed and the instance it failed
on; :func:`replay` re-runs that check from the serialized form.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Callable, Iterable, Sequence

import networkx as nx
from networkx.generators.atlas import graph_atlas_g

from . import iso, wl
from .formats import (graph_from_dict, graph_to_dict, hypergraph_from_dict, hypergraph_to_dict,
                      poset_from_dict, poset_to_dict)
from .graph import (Graph, Hypergraph, NodePoset, Permutation, apply_permutation,
                    bfs_distances, cycle_graph, enclosing_subgraph,
                    incidence_graph, path_graph, permute_poset, random_bounded_degree_graph,
                    random_graph, undirected_view)
from .labeling import (NodeLabeling, TRICKS, hasse_embedding, linear_order_labels,
                       set_labeling_distinguishes, subset_pooling_distinguishes, subset_zero_one,
                       zero_one)

CLAIMS = ("theorem1", "gae", "boost", "subset", "poset", "hypergraph", "pooling", "klwl")


@dataclass
class AuditResult:
    claim: str
    instances: int = 0
    agreements: int = 0
    counterexamples: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "FAIL" if self.counterexamples else "PASS"

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def as_dict(self) -> dict:
        return {"claim": self.claim, "verdict": self.verdict, "instances": self.instances,
                "agreements": self.agreements, "counterexamples": self.counterexamples,
                "details": self.details}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


# -- enumeration ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _atlas() -> tuple:
    return tuple(graph_atlas_g())


def enumerate_graphs(n: int, connected: bool = True) -> list[Graph]:
    """Every graph on ``n`` nodes up to isomorphism (``n <= 7``), one representative each."""
    if n > 7:
        raise ValueError("the graph atlas stops at 7 nodes")
    out = []
    for G in _atlas():
        if G.number_of_nodes() != n:
            continue
        if connected and not nx.is_connected(G):
            continue
        out.append(Graph.from_edges(n, [(u + 1, v + 1) for u, v in G.edges()]))
    return out


def enumerate_posets(members: Sequence[int]) -> list[NodePoset]:
    """All partial orders on ``members`` (labeled, not up to isomorphism)."""
    members = list(members)
    strict = [(u, v) for u in members for v in members if u != v]
    found = []
    for mask in range(1 << len(strict)):
        rel = {strict[k] for k in range(len(strict)) if mask >> k & 1}
        if any((v, u) in rel for u, v in rel):
            continue
        if any((u, w) not in rel for u, v in rel for x, w in rel if x == v and u != w):
            continue
        found.append(NodePoset(frozenset(members), frozenset(rel)))
    return found


def enumerate_digraphs(n: int) -> list[Graph]:
    """All labeled directed graphs on ``n`` nodes (no loops)."""
    arcs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return [Graph.from_edges(n, [a for k, a in enumerate(arcs) if mask >> k & 1], True)
            for mask in range(1 << len(arcs))]


def _no_labels(s, g: Graph) -> NodeLabeling:
    return NodeLabeling(((0,),) * g.n, "none")


_AUDIT_TRICKS = {"none": _no_labels, **{k: v.fn for k, v in TRICKS.items()}}


def _trick(name: str) -> Callable:
    try:
        return _AUDIT_TRICKS[name]
    except KeyError:
        raise ValueError(f"unknown labeling {name!r}; choose from {', '.join(_AUDIT_TRICKS)}") from None


# -- per-instance checks (shared by the audits and by replay) -----------------------------

def _code_multiset(g: Graph, s: NodePoset, labels) -> tuple:
    return tuple(sorted(iso.node_codes(g, sorted(s.members), labels=labels)))


def check_set_equivalence(g1, s1, g2, s2, trick: str = "zero_one") -> dict:
    """Set-graph isomorphism vs labeled-graph isomorphism vs equal labeled node codes."""
    fn = _trick(trick)
    l1, l2 = fn(s1, g1).labels, fn(s2, g2).labels
    empty = NodePoset.of_set(())
    set_iso = iso.are_substructures_isomorphic(s1, g1, s2, g2)
    labeled_iso = (g1.n == g2.n and len(s1.members) == len(s2.members)
                   and iso.are_substructures_isomorphic(empty, g1, empty, g2, labels1=l1, labels2=l2))
    codes_equal = len(s1.members) == len(s2.members) and \
        _code_multiset(g1, s1, l1) == _code_multiset(g2, s2, l2)
    ok = set_iso == labeled_iso == codes_equal
    return {"ok": ok, "set_iso": set_iso, "labeled_iso": labeled_iso, "codes_equal": codes_equal}


def check_wl_soundness(g1, s1, g2, s2, trick: str = "zero_one") -> dict:
    """Labeled 1-WL must not separate isomorphic targets."""
    fn = _trick(trick)
    separates = wl.wl_distinguishes(g1, fn(s1, g1), s1, g2, fn(s2, g2), s2)
    isomorphic = iso.are_substructures_isomorphic(s1, g1, s2, g2)
    return {"ok": not (isomorphic and separates), "isomorphic": isomorphic, "separates": separates}


def check_gae_witness(g1, s1, g2, s2) -> dict:
    """Unlabeled node codes aggregate equally while the targets are not isomorphic."""
    codes_equal = (len(s1.members) == len(s2.members)
                   and _code_multiset(g1, s1, None) == _code_multiset(g2, s2, None))
    isomorphic = iso.are_substructures_isomorphic(s1, g1, s2, g2)
    return {"ok": codes_equal and not isomorphic, "codes_equal": codes_equal,
            "isomorphic": isomorphic}


def check_subset_equivalence(g1, s1, g2, s2) -> dict:
    """Subset(|S|-1) pooling with the oracle agrees with set labeling and with isomorphism."""
    k = len(s1.members) - 1
    pooled = subset_pooling_distinguishes(g1, s1, g2, s2, k, engine="oracle")
    setlab = set_labeling_distinguishes(g1, s1, g2, s2, engine="oracle")
    isomorphic = iso.are_substructures_isomorphic(s1, g1, s2, g2)
    return {"ok": pooled == setlab == (not isomorphic), "pooled_separates": pooled,
            "set_separates": setlab, "isomorphic": isomorphic}


def _one_head_codes(g, s, p) -> tuple:
    return tuple(sorted(iso.node_codes(g, sorted(s.members), labels=subset_zero_one(set(p), g).labels)))


def check_one_head(g1, s1, p1, g2, s2, p2) -> dict:
    """Non-isomorphic targets get different oracle codes under any (|S|-1)-subset labels."""
    isomorphic = iso.are_substructures_isomorphic(s1, g1, s2, g2)
    equal = _one_head_codes(g1, s1, p1) == _one_head_codes(g2, s2, p2)
    return {"ok": isomorphic or not equal, "isomorphic": isomorphic, "codes_equal": equal}


def check_poset_equivalence(g1, s1, g2, s2, trick: str = "hasse") -> dict:
    fn = _trick(trick)
    isomorphic = iso.are_substructures_isomorphic(s1, g1, s2, g2)
    codes_equal = len(s1.members) == len(s2.members) and \
        _code_multiset(g1, s1, fn(s1, g1).labels) == _code_multiset(g2, s2, fn(s2, g2).labels)
    return {"ok": isomorphic == codes_equal, "isomorphic": isomorphic, "codes_equal": codes_equal}


def check_hypergraph_equivalence(h1, s1, h2, s2) -> dict:
    hyper_iso = iso.are_hypergraphs_isomorphic(s1, h1, s2, h2)
    graph_iso = iso.are_substructures_isomorphic(s1, incidence_graph(h1), s2, incidence_graph(h2))
    return {"ok": hyper_iso == graph_iso, "hypergraph_iso": hyper_iso, "incidence_iso": graph_iso}


def check_pooling(g1, g2, k: int = 2, l: int = 1) -> dict:
    plain = wl.kwl_graph_colors([g1, g2], k)
    _, pooled = wl.kwl_l_pooling_batch([g1, g2], k, l)
    a, b = plain[0] == plain[1], pooled[0] == pooled[1]
    return {"ok": a == b, "kwl_equal": a, "pooled_equal": b}


def check_klwl_poset(g1, t1, g2, t2, k: int = 2) -> dict:
    """k,l-WL tuple colours vs linear-order labels plus 1-WL (graph-level)."""
    l = len(t1)
    per, _ = wl.kl_wl_batch([g1, g2], k, l, [[tuple(t1)], [tuple(t2)]])
    klwl_equal = per[0][tuple(t1)] == per[1][tuple(t2)]
    lab1 = linear_order_labels(NodePoset.chain(t1), g1)
    lab2 = linear_order_labels(NodePoset.chain(t2), g2)
    labeled_equal = not wl.wl_graph_distinguishes(g1, lab1, g2, lab2)
    return {"ok": klwl_equal == labeled_equal, "klwl_equal": klwl_equal,
            "labeled_wl_equal": labeled_equal}


_CHECKS = {
    "set_equivalence": (check_set_equivalence, ("graph", "target", "graph", "target")),
    "wl_soundness": (check_wl_soundness, ("graph", "target", "graph", "target")),
    "gae_witness": (check_gae_witness, ("graph", "target", "graph", "target")),
    "subset_equivalence": (check_subset_equivalence, ("graph", "target", "graph", "target")),
    "one_head": (check_one_head, ("graph", "target", "list", "graph", "target", "list")),
    "poset_equivalence": (check_poset_equivalence, ("graph", "target", "graph", "target")),
    "hypergraph_equivalence": (check_hypergraph_equivalence,
                               ("hypergraph", "target", "hypergraph", "target")),
    "pooling": (check_pooling, ("graph", "graph")),
    "klwl_poset": (check_klwl_poset, ("graph", "list", "graph", "list")),
}

_ENCODERS = {"graph": graph_to_dict, "target": poset_to_dict, "list": list,
             "hypergraph": hypergraph_to_dict}
_DECODERS = {"graph": graph_from_dict, "target": poset_from_dict, "list": tuple,
             "hypergraph": hypergraph_from_dict}


def counterexample(claim: str, check: str, args: Sequence, observed: dict, **options) -> dict:
    kinds = _CHECKS[check][1]
    return {"claim": claim, "check": check, "args": [_ENCODERS[k](a) for k, a in zip(kinds, args)],
            "options": options, "observed": {k: v for k, v in observed.items() if k != "ok"}}


def replay(cx: dict) -> bool:
    """Re-run a serialized counterexample; True when it still fails."""
    if cx["check"] == "missing_witness":
        return not run_audit(cx["claim"], **cx["options"]).details.get("witnesses")
    fn, kinds = _CHECKS[cx["check"]]
    args = [_DECODERS[k](a) for k, a in zip(kinds, cx["args"])]
    return not fn(*args, **cx.get("options", {}))["ok"]


def _missing(claim: str, reason: str, **options) -> dict:
    return {"claim": claim, "check": "missing_witness", "reason": reason, "options": options}


# -- partition comparison ---------------------------------------------------------------

def _partition_conflicts(keys: Sequence[tuple]) -> list:
    """Pairs of instance indices on which the given key columns disagree.

    ``keys[i]`` is a tuple of representations of instance ``i``; the columns
    must all induce the same partition.  One witness pair per conflict.
    """
    if not keys:
        return []
    conflicts = []
    for col in range(len(keys[0])):
        first = {}
        for i, key in enumerate(keys):
            first.setdefault(key[col], i)
        for i, key in enumerate(keys):
            j = first[key[col]]
            if keys[j] != key:
                conflicts.append((j, i))
    seen, out = set(), []
    for pair in conflicts:
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def _partition_sizes(keys: Sequence[tuple]) -> int:
    """Number of instance pairs compared implicitly by a partition check."""
    return len(keys) * (len(keys) - 1) // 2


# -- Theorem-1 style set audit ---------------------------------------------------------

def _instances(graphs: Sequence[Graph], size: int) -> list:
    return [(g, NodePoset.of_set(s)) for g in graphs for s in combinations(g.nodes, size)]


def audit_theorem_1(n_max: int = 7, set_sizes: Iterable[int] = (1, 2, 3), *, seed: int = 0,
                    exhaustive_max: int = 5, sample_pairs: int = 10_000,
                    trick: str = "zero_one") -> AuditResult:
    """Set-graph isomorphism vs labeled isomorphism vs labeled node-code multisets.

    Connected graphs up to ``exhaustive_max`` nodes are compared pairwise
    with the brute-force oracle; larger ``n`` up to ``n_max`` use seeded
    sampled pairs (half of them planted isomorphic copies).  Joint 1-WL on
    the labeled graphs is checked for soundness on every compared pair.
    """
    res = AuditResult("theorem1")
    sizes = sorted(set(set_sizes))
    rng = random.Random(seed)
    per_n = {}

    def compare(g1, s1, g2, s2, r1=None, r2=None):
        obs = check_set_equivalence(g1, s1, g2, s2, trick)
        res.instances += 1
        if obs["ok"]:
            res.agreements += 1
        else:
            res.counterexamples.append(counterexample("theorem1", "set_equivalence",
                                                      (g1, s1, g2, s2), obs, trick=trick))
        if r1 is not None and obs["set_iso"] and r1 != r2:
            res.counterexamples.append(counterexample(
                "theorem1", "wl_soundness", (g1, s1, g2, s2),
                {"isomorphic": True, "separates": True}, trick=trick))

    fn = _trick(trick)
    for n in range(1, min(n_max, exhaustive_max) + 1):
        graphs = enumerate_graphs(n)
        for k in sizes:
            if k > n:
                continue
            inst = _instances(graphs, k)
            cols = wl.refine_batch([g for g, _ in inst], [fn(s, g) for g, s in inst])
            reps = [tuple(sorted(c.color(u) for u in s.members)) for c, (_, s) in zip(cols, inst)]
            for a, b in combinations(range(len(inst)), 2):
                compare(*inst[a], *inst[b], reps[a], reps[b])
            per_n[f"n={n},|S|={k}"] = len(inst)
    sampled = 0
    big = [n for n in range(exhaustive_max + 1, n_max + 1)]
    if big and sample_pairs:
        pools = {n: enumerate_graphs(n) for n in big}
        for t in range(sample_pairs):
            n = rng.choice(big)
            k = rng.choice([k for k in sizes if k <= n])
            g1 = rng.choice(pools[n])
            s1 = NodePoset.of_set(rng.sample(range(1, n + 1), k))
            if rng.random() < 0.5:
                g2, s2 = g1, s1
            else:
                same = [g for g in pools[n] if g.num_edges == g1.num_edges]
                g2 = rng.choice(same)
                s2 = NodePoset.of_set(rng.sample(range(1, n + 1), k))
            p = Permutation.random(n, rng)
            g2, s2 = apply_permutation(g2, p), permute_poset(s2, p)
            obs = check_set_equivalence(g1, s1, g2, s2, trick)
            res.instances += 1
            sampled += 1
            if obs["ok"]:
                res.agreements += 1
            else:
                res.counterexamples.append(counterexample("theorem1", "set_equivalence",
                                                          (g1, s1, g2, s2), obs, trick=trick))
            if obs["set_iso"]:
                snd = check_wl_soundness(g1, s1, g2, s2, trick)
                if not snd["ok"]:
                    res.counterexamples.append(counterexample("theorem1", "wl_soundness",
                                                              (g1, s1, g2, s2), snd, trick=trick))
    res.details = {"exhaustive_instances": per_n, "sampled_pairs": sampled, "n_max": n_max,
                   "exhaustive_max": exhaustive_max, "set_sizes": sizes, "trick": trick,
                   "seed": seed}
    return res


# -- GAE failure ------------------------------------------------------------------------

def c6_link_pair() -> tuple:
    g = cycle_graph(6)
    return g, NodePoset.of_set({1, 2}), g, NodePoset.of_set({1, 3})


def find_gae_failures(n_max: int = 6, limit: int = 10, size: int = 2) -> list:
    """Same-graph target pairs whose unlabeled node-code multisets agree but are not isomorphic."""
    found = []
    for n in range(size, n_max + 1):
        for g in enumerate_graphs(n):
            codes = iso.node_codes(g, g.nodes)
            by_rep = defaultdict(list)
            for s in combinations(g.nodes, size):
                by_rep[tuple(sorted(codes[u - 1] for u in s))].append(NodePoset.of_set(s))
            for group in by_rep.values():
                classes = {}
                for s in group:
                    classes.setdefault(iso.canonical_code(s, g), s)
                if len(classes) > 1:
                    a, b = list(classes.values())[:2]
                    found.append((g, a, g, b))
                    if len(found) >= limit:
                        return found
                    break
    return found


def audit_gae_failure(instances: Sequence | None = None, *, n_max: int = 6,
                      limit: int = 10) -> AuditResult:
    """Exhibit targets that plain node-code aggregation merges although they differ.

    The C6 link pair is always included; ``instances`` defaults to a search
    over connected graphs up to ``n_max`` nodes.
    """
    res = AuditResult("gae")
    cands = [c6_link_pair()] + list(instances if instances is not None
                                     else find_gae_failures(n_max, limit))
    witnesses = []
    for g1, s1, g2, s2 in cands:
        obs = check_gae_witness(g1, s1, g2, s2)
        res.instances += 1
        if obs["ok"]:
            res.agreements += 1
            witnesses.append({"g1": graph_to_dict(g1), "s1": sorted(s1.members),
                              "g2": graph_to_dict(g2), "s2": sorted(s2.members)})
    res.details = {"witnesses": witnesses, "c6_included": bool(witnesses)
                   and witnesses[0]["s2"] == [1, 3]}
    if not res.details["c6_included"]:
        res.counterexamples.append(_missing("gae", "C6 pair did not verify", n_max=n_max,
                                            limit=limit))
    return res


# -- Theorem 2: boosted link pairs --------------------------------------------------------

@dataclass
class BoostReport:
    count: int
    listing: list
    degree_condition: dict
    confirmed_by: str
    labeling: str
    h: int

    def as_dict(self) -> dict:
        return {"count": self.count, "listing": self.listing, "labeling": self.labeling,
                "h": self.h, "confirmed_by": self.confirmed_by,
                "degree_condition": self.degree_condition}


def degree_condition(g: Graph, h: int) -> dict:
    """Whether every degree lies in ``[1, ((1 - eps) log n)^(1/(2h+2))]`` for the best eps."""
    n = g.n
    degs = [g.degree(v) for v in g.nodes]
    if n < 3:
        return {"holds": False, "reason": "n too small for the logarithmic bound"}
    eps_min = math.log(math.log(n)) / ((2 * h + 2) * math.log(n))
    bound = ((1 - eps_min) * math.log(n)) ** (1 / (2 * h + 2))
    return {"holds": min(degs) >= 1 and max(degs) <= bound, "min_degree": min(degs),
            "max_degree": max(degs), "eps_lower": eps_min, "degree_bound": bound,
            "nodes_within_bound": sum(1 <= d <= bound for d in degs)}


def _ball(ug: Graph, v: int, h: int) -> dict:
    d = bfs_distances(ug, v)
    return {u: k for u, k in d.items() if k <= h}


def count_boosted_link_pairs(g: Graph, h: int = 3, labeling: str = "zero_one",
                             list_limit: int = 50) -> BoostReport:
    """Count link pairs ``(u, w), (v, w)`` that h-round 1-WL merges but labeled WL separates.

    ``u`` and ``v`` must share their h-round vanilla colour.  With
    ``labeling="zero_one"`` a link is represented by the multiset of its two
    endpoint colours after h labeled rounds; with ``labeling="subset1"`` by
    the colours of each endpoint in the graph where only that endpoint is
    labeled.  Colours are computed on h-hop balls, which is exact for h rounds.
    Listed triples are confirmed non-isomorphic by the oracle when the graph
    is within its bound and by the (sound) labeled refinement otherwise.
    """
    if labeling not in ("zero_one", "subset1"):
        raise ValueError("labeling must be 'zero_one' or 'subset1'")
    vanilla = wl.refine_batch([g], None, h)[0]
    classes = defaultdict(list)
    for v in g.nodes:
        classes[vanilla.color(v)].append(v)
    classes = {c: m for c, m in classes.items() if len(m) > 1}
    cls_of = {v: c for c, m in classes.items() for v in m}
    interner = wl.ColorInterner()
    ug = undirected_view(g)
    selfc: dict = {}

    def self_color(z: int) -> int:
        # h-round colour of z when z alone is labeled; depends only on its h-ball
        if z not in selfc:
            sub, s, _ = enclosing_subgraph(g, {z}, h)
            (zz,) = s.members
            selfc[z] = interner.refine(sub, zero_one(s, sub), rounds=h)[-1][zz - 1]
        return selfc[z]

    def link_rep(x: int, w: int, near: bool):
        if labeling == "subset1" or not near:
            return tuple(sorted((self_color(x), self_color(w))))
        sub, s, index = enclosing_subgraph(g, {x, w}, h)
        row = interner.refine(sub, zero_one(s, sub), rounds=h)[-1]
        return tuple(sorted((row[index[x] - 1], row[index[w] - 1])))

    def choose2(k):
        return k * (k - 1) // 2

    class_counts = {c: Counter(self_color(v) for v in m) for c, m in classes.items()}
    base = {c: choose2(sum(cnt.values())) - sum(choose2(k) for k in cnt.values())
            for c, cnt in class_counts.items()}
    total = 0
    listing = []
    for w in g.nodes:
        ball = _ball(ug, w, h) if labeling == "zero_one" else {w: 0}
        touched = defaultdict(dict)
        for u, dist in ball.items():
            if u != w and u in cls_of:
                touched[cls_of[u]][u] = link_rep(u, w, True)
        if w in cls_of:
            touched[cls_of[w]].setdefault(w, None)
        wc = self_color(w)
        for c, m in classes.items():
            if c not in touched:
                # every member is far from w: the link reps differ exactly when self colours do
                total += base[c]
                if len(listing) < list_limit and base[c]:
                    for u, v in combinations(m, 2):
                        if self_color(u) != self_color(v) and w not in (u, v):
                            listing.append([w, u, v])
                            break
                continue
            reps = {}
            for u in m:
                if u == w:
                    continue
                reps[u] = touched[c][u] if u in touched[c] else tuple(sorted((self_color(u), wc)))
            cnt = Counter(reps.values())
            total += choose2(len(reps)) - sum(choose2(k) for k in cnt.values())
            if len(listing) < list_limit:
                for u, v in combinations(sorted(reps), 2):
                    if reps[u] != reps[v]:
                        listing.append([w, u, v])
                        break
    confirmed_by = "labeled-wl"
    if g.n <= iso.MAX_ORACLE_NODES:
        confirmed_by = "oracle"
        for w, u, v in listing:
            if iso.are_substructures_isomorphic({u, w}, g, {v, w}, g):
                raise AssertionError(f"labeled refinement separated isomorphic links ({u},{w}) "
                                     f"and ({v},{w})")
    return BoostReport(total, listing, degree_condition(g, h), confirmed_by, labeling, h)


def theorem2_trend(ns: Sequence[int] = (50, 100, 200), seeds: Sequence[int] = range(5),
                   h: int = 3, max_degree: int = 3, labeling: str = "zero_one") -> dict:
    """Boosted-pair counts on seeded bounded-degree graphs, per seed and size."""
    table = {}
    for seed in seeds:
        row = []
        for n in ns:
            g = random_bounded_degree_graph(n, max_degree, random.Random(f"{seed}:{n}"))
            row.append(count_boosted_link_pairs(g, h, labeling, list_limit=0).count)
        table[str(seed)] = row
    positive = all(c > 0 for row in table.values() for c in row)
    monotone = all(a <= b for row in table.values() for a, b in zip(row, row[1:]))
    return {"ns": list(ns), "h": h, "max_degree": max_degree, "labeling": labeling,
            "counts": table, "all_positive": positive, "non_decreasing": monotone}


def audit_boost(*, seed: int = 0, ns: Sequence[int] = (50, 100, 200), n_seeds: int = 5,
                h: int = 3) -> AuditResult:
    res = AuditResult("boost")
    c6 = count_boosted_link_pairs(cycle_graph(6), h)
    trend = theorem2_trend(ns, range(seed, seed + n_seeds), h)
    sub = theorem2_trend(ns[:1], range(seed, seed + 1), h, labeling="subset1")
    res.instances = 1 + len(ns) * n_seeds
    res.agreements = int(c6.count >= 2) + sum(
        c > 0 for row in trend["counts"].values() for c in row)
    res.details = {"c6": c6.as_dict(), "trend": trend, "subset1": sub,
                   "degree_condition_example": degree_condition(
                       random_bounded_degree_graph(ns[-1], 3, random.Random(f"{seed}:{ns[-1]}")), h)}
    if c6.count < 2:
        res.counterexamples.append(_missing("boost", "C6 count below 2", seed=seed))
    if not (trend["all_positive"] and trend["non_decreasing"]):
        res.counterexamples.append(_missing("boost", "counts not positive and non-decreasing",
                                            seed=seed))
    return res


# -- subset labeling ------------------------------------------------------------------------

class _CodeCache:
    """Node codes of a graph under subset labels, memoized per (graph, subset)."""

    def __init__(self):
        self.store = {}

    def codes(self, gid: int, g: Graph, p: frozenset) -> list:
        key = (g, p)
        if key not in self.store:
            self.store[key] = iso.node_codes(g, g.nodes, labels=subset_zero_one(set(p), g).labels)
        return self.store[key]


def audit_subset_theorems(n_max: int = 6, *, sizes: Sequence[int] = (2, 3)) -> AuditResult:
    """Subset-labeling claims with the oracle (exhaustive) and 1-WL (gallery).

    (a) subset(|S|-1) pooling, set labeling and isomorphism give the same
    partition; (b) one-head (|S|-1) codes never collide across isomorphism
    classes; (c) a pair subset(1) head pooling with the oracle merges although
    the sets differ; (d) the two 1-WL separations shipped in the gallery.
    """
    res = AuditResult("subset")
    cache = _CodeCache()
    counts = {}
    prop11 = None
    head_groups = defaultdict(dict)
    for n in range(2, n_max + 1):
        graphs = enumerate_graphs(n)
        for k in sizes:
            if k > n:
                continue
            inst = [(gid, g, NodePoset.of_set(s)) for gid, g in enumerate(graphs)
                    for s in combinations(g.nodes, k)]
            keys, heads = [], defaultdict(dict)
            for gid, g, s in inst:
                mem = sorted(s.members)
                cls = iso.canonical_code(s, g)
                full = cache.codes(gid, g, frozenset(mem))
                set_rep = tuple(sorted(full[u - 1] for u in mem))
                pool, onehead = [], []
                for p in combinations(mem, k - 1):
                    codes = cache.codes(gid, g, frozenset(p))
                    r = tuple(sorted(codes[u - 1] for u in mem))
                    pool.append(r)
                    onehead.append((p, r))
                keys.append((cls, set_rep, tuple(sorted(pool))))
                for p, r in onehead:
                    heads[r].setdefault(cls, (gid, g, s, p))
                if k == 2 and prop11 is None:
                    head1 = tuple(sorted(cache.codes(gid, g, frozenset({u}))[u - 1] for u in mem))
                    head_groups[head1].setdefault(cls, (g, s))
            counts[f"n={n},|S|={k}"] = len(inst)
            res.instances += len(inst)
            bad = _partition_conflicts(keys)
            bad_idx = {i for pair in bad for i in pair}
            res.agreements += len(inst) - len(bad_idx)
            for a, b in bad[:20]:
                _, g1, s1 = inst[a]
                _, g2, s2 = inst[b]
                obs = check_subset_equivalence(g1, s1, g2, s2)
                res.counterexamples.append(counterexample("subset", "subset_equivalence",
                                                          (g1, s1, g2, s2), obs))
            for by_cls in head_groups.values():
                if len(by_cls) > 1 and prop11 is None:
                    (g1, s1), (g2, s2) = list(by_cls.values())[:2]
                    prop11 = (g1, s1, g2, s2)
            head_groups.clear()
            for by_cls in heads.values():
                if len(by_cls) > 1:
                    (_, g1, s1, p1), (_, g2, s2, p2) = list(by_cls.values())[:2]
                    obs = check_one_head(g1, s1, p1, g2, s2, p2)
                    res.counterexamples.append(counterexample("subset", "one_head",
                                                              (g1, s1, p1, g2, s2, p2), obs))
    details = {"instances": counts}
    if prop11 is not None:
        g1, s1, g2, s2 = prop11
        head_tie = not subset_pooling_distinguishes(g1, s1, g2, s2, 1, engine="oracle",
                                                    readout="head")
        non_iso = not iso.are_substructures_isomorphic(s1, g1, s2, g2)
        details["prop11_witness"] = {"g1": graph_to_dict(g1), "s1": sorted(s1.members),
                                     "g2": graph_to_dict(g2), "s2": sorted(s2.members),
                                     "head_pooling_ties": head_tie, "non_isomorphic": non_iso}
        if not (head_tie and non_iso):
            prop11 = None
    if prop11 is None:
        res.counterexamples.append(_missing("subset", "no subset(1) oracle tie found", n_max=n_max))
    from .gallery import gallery
    for inst in gallery():
        if inst.name in ("c6-vs-2k3-whole-graph", "set-beats-subset"):
            details[f"prop12_{inst.name}"] = inst.matrix
    res.details = details
    return res


# -- posets -------------------------------------------------------------------------------

def audit_poset(n_max: int = 6, *, seed: int = 0, graphs_per_n: int = 20,
                min_witnesses: int = 10, exhaustive_n: int = 3, sampled_posets: int = 300) -> AuditResult:
    """Directed-link separations by the Hasse labels, and the poset equivalence.

    (a) For arcs ``u -> v`` in seeded random digraphs, compare the posets
    ``u < v`` and ``v < u``: record witnesses where the two are not
    isomorphic, set labeling ties and Hasse labels plus 1-WL separate; any
    separation of isomorphic posets is a counterexample.  (b) Hasse labels
    plus oracle node codes induce the isomorphism partition on every poset of
    at most 3 members in every digraph on ``exhaustive_n`` nodes, and on
    sampled digraphs up to ``n_max`` nodes.
    """
    res = AuditResult("poset")
    rng = random.Random(seed)
    witnesses = []
    graphs = [path_graph(3, directed=True)]
    for n in range(3, n_max + 1):
        for _ in range(graphs_per_n):
            graphs.append(random_graph(n, rng.uniform(0.2, 0.6), rng, directed=True))
    checked = 0
    for g in graphs:
        for u, v in sorted(g.edges):
            a, b = NodePoset.chain([u, v]), NodePoset.chain([v, u])
            isomorphic = iso.are_substructures_isomorphic(a, g, b, g)
            set_sep = set_labeling_distinguishes(g, a, g, b, zero_one)
            hasse_sep = wl.wl_distinguishes(g, hasse_embedding(a, g), a, g, hasse_embedding(b, g), b)
            checked += 1
            res.instances += 1
            if isomorphic and hasse_sep:
                res.counterexamples.append(counterexample(
                    "poset", "wl_soundness", (g, a, g, b),
                    {"isomorphic": True, "separates": True}, trick="hasse"))
                continue
            res.agreements += 1
            if not isomorphic and not set_sep and hasse_sep:
                witnesses.append({"graph": graph_to_dict(g), "link": [u, v]})
    if len(witnesses) < min_witnesses:
        res.counterexamples.append(_missing("poset", f"only {len(witnesses)} directed-link witnesses",
                                            n_max=n_max, seed=seed))
    # (b) partition equivalence
    inst = []
    for n in range(1, exhaustive_n + 1):
        for g in enumerate_digraphs(n):
            for k in range(1, min(3, n) + 1):
                for mem in combinations(g.nodes, k):
                    inst.extend((g, p) for p in enumerate_posets(mem))
    for _ in range(sampled_posets):
        n = rng.randint(exhaustive_n + 1, max(exhaustive_n + 1, min(n_max, 6)))
        g = random_graph(n, rng.uniform(0.2, 0.6), rng, directed=True)
        mem = rng.sample(range(1, n + 1), rng.randint(1, 3))
        p = rng.choice(enumerate_posets(sorted(mem)))
        inst.append((g, p))
        q = Permutation.random(n, rng)
        inst.append((apply_permutation(g, q), permute_poset(p, q)))
    groups = defaultdict(list)
    for g, p in inst:
        groups[(g.n, len(p.members))].append((g, p))
    n_part = 0
    for items in groups.values():
        keys = [(iso.canonical_code(p, g), _code_multiset(g, p, hasse_embedding(p, g).labels))
                for g, p in items]
        bad = _partition_conflicts(keys)
        n_part += len(items)
        for a, b in bad[:20]:
            obs = check_poset_equivalence(*items[a], *items[b])
            res.counterexamples.append(counterexample("poset", "poset_equivalence",
                                                      (*items[a], *items[b]), obs, trick="hasse"))
    res.instances += n_part
    res.agreements += n_part - min(n_part, sum(1 for c in res.counterexamples
                                               if c["check"] == "poset_equivalence"))
    res.details = {"links_checked": checked, "witnesses": witnesses[:50],
                   "witness_count": len(witnesses), "poset_instances": n_part}
    return res


# -- hypergraphs ----------------------------------------------------------------------------

def _all_hypergraphs(n: int, m: int) -> list:
    cols = [c for c in product((0, 1), repeat=n) if any(c)]
    out = []
    for choice in product(cols, repeat=m):
        rows = tuple(tuple(choice[j][i] for j in range(m)) for i in range(n))
        out.append(Hypergraph(n, rows))
    return out


def audit_hypergraph(n_max: int = 4, m_max: int = 3, *, seed: int = 0,
                     direct_pairs: int = 300) -> AuditResult:
    """Poset-hypergraph isomorphism vs isomorphism of the incidence graphs.

    Exhaustive over every labeled hypergraph with ``n <= n_max`` nodes,
    ``1 <= m <= m_max`` non-empty hyperedges and every target that is a
    single node, a node pair, or an ordered node pair; the two partitions
    (plus, for set targets, zero-one labeled node codes on the incidence
    graph) must coincide.  Seeded direct pairs add brute-force checks on
    both sides.
    """
    res = AuditResult("hypergraph")
    counts = {}
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            hs = _all_hypergraphs(n, m)
            targets = [NodePoset.of_set({u}) for u in range(1, n + 1)]
            targets += [NodePoset.of_set(p) for p in combinations(range(1, n + 1), 2)]
            targets += [NodePoset.chain(p) for p in permutations(range(1, n + 1), 2)]
            by_kind = defaultdict(list)
            for h in hs:
                ig = incidence_graph(h)
                for s in targets:
                    hcode = iso.hypergraph_canonical_code(s, h)
                    gcode = iso.canonical_code(s, ig)
                    key = (hcode, gcode)
                    if s.is_set:
                        key += (_code_multiset(ig, s, zero_one(s, ig).labels),)
                    by_kind[(len(s.members), s.is_set)].append(((h, s), key))
            for kind, items in by_kind.items():
                keys = [k for _, k in items]
                bad = _partition_conflicts(keys)
                res.instances += len(items)
                res.agreements += len(items) - len({i for p in bad for i in p})
                for a, b in bad[:20]:
                    (h1, s1), (h2, s2) = items[a][0], items[b][0]
                    obs = check_hypergraph_equivalence(h1, s1, h2, s2)
                    res.counterexamples.append(counterexample(
                        "hypergraph", "hypergraph_equivalence", (h1, s1, h2, s2), obs))
            counts[f"n={n},m={m}"] = len(hs)
    rng = random.Random(seed)
    direct = 0
    for _ in range(direct_pairs):
        n, m = rng.randint(1, n_max), rng.randint(1, m_max)
        hs = _all_hypergraphs(n, m)
        h1 = rng.choice(hs)
        s1 = NodePoset.of_set(rng.sample(range(1, n + 1), rng.randint(1, min(2, n))))
        if rng.random() < 0.5:
            pn, pe = Permutation.random(n, rng), Permutation.random(m, rng)
            h2, s2 = h1.permute(pn, pe), permute_poset(s1, pn)
        else:
            h2 = rng.choice(hs)
            s2 = NodePoset.of_set(rng.sample(range(1, n + 1), len(s1.members)))
        obs = check_hypergraph_equivalence(h1, s1, h2, s2)
        direct += 1
        res.instances += 1
        if obs["ok"]:
            res.agreements += 1
        else:
            res.counterexamples.append(counterexample("hypergraph", "hypergraph_equivalence",
                                                      (h1, s1, h2, s2), obs))
    res.details = {"hypergraphs": counts, "direct_pairs": direct, "n_max": n_max, "m_max": m_max}
    return res


# -- k-WL pooling and k,l-WL ------------------------------------------------------------------

def _regular_graph(n: int, d: int, rng: random.Random) -> Graph:
    G = nx.random_regular_graph(d, n, seed=rng.randrange(2 ** 32))
    return Graph.from_edges(n, [(u + 1, v + 1) for u, v in G.edges()])


def _sample_graph_pair(rng: random.Random, n_lo: int, n_hi: int) -> tuple:
    kind = rng.randrange(3)
    n = rng.randint(n_lo, n_hi)
    if kind == 0:
        g = random_graph(n, rng.uniform(0.2, 0.7), rng)
        return g, apply_permutation(g, Permutation.random(n, rng)), "planted"
    if kind == 1:
        d = rng.choice([d for d in (2, 3, 4) if d < n and (n * d) % 2 == 0] or [2])
        if (n * d) % 2:
            n += 1
        return _regular_graph(n, d, rng), _regular_graph(n, d, rng), "regular"
    g1 = random_graph(n, rng.uniform(0.2, 0.7), rng)
    g2 = random_graph(n, rng.uniform(0.2, 0.7), rng)
    return g1, g2, "random"


def audit_pooling(samples: int = 500, *, seed: int = 0, k: int = 2, l: int = 1,
                  n_range: tuple = (3, 8)) -> AuditResult:
    """k-WL graph colours equal iff pooled k-WL (l-tuples) graph colours equal."""
    res = AuditResult("pooling")
    rng = random.Random(seed)
    kinds = Counter()
    for _ in range(samples):
        g1, g2, kind = _sample_graph_pair(rng, *n_range)
        kinds[kind] += 1
        obs = check_pooling(g1, g2, k, l)
        res.instances += 1
        if obs["ok"]:
            res.agreements += 1
        else:
            res.counterexamples.append(counterexample("pooling", "pooling", (g1, g2), obs, k=k, l=l))
    res.details = {"k": k, "l": l, "pair_kinds": dict(sorted(kinds.items())), "seed": seed}
    return res


def audit_klwl_poset(samples: int = 500, *, seed: int = 0, k: int = 2, tuple_size: int = 2,
                     n_range: tuple = (3, 7)) -> AuditResult:
    """k,l-WL tuple colours vs linear-order poset labels plus 1-WL on sampled tuple pairs.

    ``l`` equals the tuple size; the default compares links (``l = 2``).
    """
    res = AuditResult("klwl")
    rng = random.Random(seed)
    equal = 0
    for _ in range(samples):
        g1, g2, kind = _sample_graph_pair(rng, *n_range)
        t1 = tuple(rng.sample(range(1, g1.n + 1), tuple_size))
        if kind == "planted" and rng.random() < 0.5:
            g2 = g1
            t2 = tuple(rng.sample(range(1, g1.n + 1), tuple_size))
        else:
            t2 = tuple(rng.sample(range(1, g2.n + 1), tuple_size))
        obs = check_klwl_poset(g1, t1, g2, t2, k)
        res.instances += 1
        equal += obs["klwl_equal"]
        if obs["ok"]:
            res.agreements += 1
        else:
            res.counterexamples.append(counterexample("klwl", "klwl_poset", (g1, t1, g2, t2), obs, k=k))
    res.details = {"k": k, "l": tuple_size, "equal_pairs": equal, "seed": seed}
    return res


# -- dispatch ---------------------------------------------------------------------------------

def run_audit(claim: str, *, seed: int = 0, n_max: int | None = None, **kw) -> AuditResult:
    """Run one named audit with CLI-style options."""
    if claim == "theorem1":
        return audit_theorem_1(n_max if n_max is not None else 7, seed=seed, **kw)
    if claim == "gae":
        return audit_gae_failure(n_max=min(n_max or 6, 7), **kw)
    if claim == "boost":
        return audit_boost(seed=seed, **kw)
    if claim == "subset":
        return audit_subset_theorems(min(n_max or 6, 7), **kw)
    if claim == "poset":
        return audit_poset(n_max or 6, seed=seed, **kw)
    if claim == "hypergraph":
        return audit_hypergraph(min(n_max or 4, 4), seed=seed, **kw)
    if claim == "pooling":
        return audit_pooling(seed=seed, **kw)
    if claim == "klwl":
        return audit_klwl_poset(seed=seed, **kw)
    raise ValueError(f"unknown claim {claim!r}; choose from {', '.join(CLAIMS)} or 'all'")
