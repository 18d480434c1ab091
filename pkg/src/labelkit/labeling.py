"""Labeling tricks: node labels that mark a target node set, poset or subset.

Every trick is a function ``trick(s, g) -> NodeLabeling``.  Stack the result
onto the graph (:meth:`NodeLabeling.stack`) or pass it as the initial colours
of :func:`labelkit.wl.wl_refine`.
"""

from __future__ import annotations

import csv
import io
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Iterable, Sequence

import numpy as np

from . import iso, wl
from .graph import (Graph, GraphError, NodePoset, Permutation, apply_permutation, as_poset,
                    bfs_distances, hasse_diagram, permute_poset, random_graph, undirected_view)

UNREACHABLE_DRNL = 0


class LabelingError(ValueError):
    """Raised when a trick's precondition on the target does not hold."""


@dataclass(frozen=True)
class NodeLabeling:
    """Integer label vector per node; ``labels[i - 1]`` belongs to node ``i``."""

    labels: tuple
    name: str = ""

    def __post_init__(self):
        rows = tuple(tuple(r) if isinstance(r, (tuple, list)) else (r,) for r in self.labels)
        if len({len(r) for r in rows}) > 1:
            raise LabelingError("label vectors must share one dimension")
        object.__setattr__(self, "labels", rows)

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, node: int) -> tuple:
        return self.labels[node - 1]

    @property
    def dim(self) -> int:
        return len(self.labels[0]) if self.labels else 0

    def permute(self, p: Permutation) -> "NodeLabeling":
        rows = [None] * len(self.labels)
        for i, row in enumerate(self.labels, start=1):
            rows[p(i) - 1] = row
        return NodeLabeling(tuple(rows), self.name)

    def stack(self, g: Graph) -> Graph:
        """Graph whose node features are the original ones followed by the labels."""
        if len(self.labels) != g.n:
            raise LabelingError(f"labeling covers {len(self.labels)} nodes, graph has {g.n}")
        return g.with_node_features([f + r for f, r in zip(g.node_features, self.labels)])

    def dense(self) -> "NodeLabeling":
        """Same partition with labels renumbered ``0, 1, 2, ...`` in sorted order."""
        table = {v: k for k, v in enumerate(sorted(set(self.labels)))}
        return NodeLabeling(tuple((table[r],) for r in self.labels), self.name)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node"] + [f"label{k}" for k in range(self.dim)] if self.dim != 1
                   else ["node", "label"])
        for i, row in enumerate(self.labels, start=1):
            w.writerow([i, *["inf" if x == math.inf else x for x in row]])
        return buf.getvalue()


def _members(s, g: Graph) -> NodePoset:
    s = as_poset(s)
    for u in s.members:
        if not 1 <= u <= g.n:
            raise GraphError(f"target node {u} is not in the graph")
    return s


# -- set tricks -----------------------------------------------------------------

def zero_one(s, g: Graph) -> NodeLabeling:
    s = _members(s, g)
    return NodeLabeling(tuple((int(i in s.members),) for i in g.nodes), "zero_one")


def subset_zero_one(p, g: Graph) -> NodeLabeling:
    """1 on the selected subset ``p``, 0 elsewhere."""
    lab = zero_one(p, g)
    return NodeLabeling(lab.labels, "subset_zero_one")


def drnl_label(dx: float, dy: float) -> int:
    """Double-radius hash of the two (masked) endpoint distances; 0 if either is infinite."""
    if dx == math.inf or dy == math.inf:
        return UNREACHABLE_DRNL
    dx, dy = int(dx), int(dy)
    d = dx + dy
    half, rem = divmod(d, 2)
    return 1 + min(dx, dy) + half * (half + rem - 1)


def _target_distances(g: Graph, targets: Sequence[int], mask: bool) -> list:
    """``dist[k][i]`` = hops from target ``k`` to node ``i``, other targets masked if asked."""
    ug = undirected_view(g)
    out = []
    for x in targets:
        blocked = [t for t in targets if t != x] if mask else []
        if len(blocked) <= 1:
            d = bfs_distances(ug, x, blocked=blocked[0] if blocked else None)
        else:
            sub = ug.without_edges([(b, v) for b in blocked for v in ug.out_adj[b]])
            d = bfs_distances(sub, x)
            for b in blocked:
                d.pop(b, None)
        out.append(d)
    return out


def drnl(s, g: Graph, mask: bool = True) -> NodeLabeling:
    """Double Radius Node Labeling for a two-node target.

    Both targets get 1.  Other nodes get the double-radius hash of their
    distances to the two targets, each distance taken with the other target
    (and its edges) removed when ``mask`` is on.
    """
    s = _members(s, g)
    if len(s.members) != 2:
        raise LabelingError(f"DRNL labels links: expected 2 target nodes, got {len(s.members)}")
    x, y = sorted(s.members)
    dx, dy = _target_distances(g, [x, y], mask)
    rows = []
    for i in g.nodes:
        if i in (x, y):
            rows.append((1,))
        else:
            rows.append((drnl_label(dx.get(i, math.inf), dy.get(i, math.inf)),))
    return NodeLabeling(tuple(rows), "drnl" if mask else "drnl_unmasked")


def distance_encoding(s, g: Graph, d_max: int | None = 3, mask: bool = False) -> NodeLabeling:
    """Sorted vector of capped hop distances to each target node.

    ``d_max=None`` removes the cap.  Unreachable targets are encoded as
    ``d_max + 1`` (``-1`` when uncapped).  With ``mask`` on, the distance to
    one target is taken with every other target removed.
    """
    s = _members(s, g)
    targets = sorted(s.members)
    dists = _target_distances(g, targets, mask)
    sentinel = -1 if d_max is None else d_max + 1
    rows = []
    for i in g.nodes:
        vec = []
        for t, d in zip(targets, dists):
            if i == t:
                vec.append(0)
            elif i in d:
                vec.append(d[i] if d_max is None else min(d[i], d_max))
            else:
                vec.append(sentinel)
        # sentinel sorts last so a reachable distance is never hidden behind it
        vec.sort(key=lambda v: (v == -1, v))
        rows.append(tuple(vec))
    return NodeLabeling(tuple(rows), "de" if not mask else "de_plus")


def de_plus(s, g: Graph) -> NodeLabeling:
    return distance_encoding(s, g, d_max=None, mask=True)


# -- poset tricks ----------------------------------------------------------------

def hasse_embedding(s, g: Graph) -> NodeLabeling:
    """0 outside the poset; inside, the isomorphism type of the node in the Hasse diagram.

    Types are exact positive integers (see :func:`labelkit.iso.marked_digraph_type`),
    so equal labels mean isomorphic Hasse-diagram positions across posets too.
    """
    s = _members(s, g)
    diagram, order = hasse_diagram(s)
    types = {u: iso.marked_digraph_type(diagram, k + 1) for k, u in enumerate(order)}
    return NodeLabeling(tuple((types.get(i, 0),) for i in g.nodes), "hasse")


def linear_order_labels(s, g: Graph) -> NodeLabeling:
    """Label ``u_i`` with ``i`` along a total order ``u_1 <= ... <= u_k``."""
    s = _members(s, g)
    if not s.is_total():
        raise LabelingError("linear order labels need a totally ordered target")
    rank = {u: sum(1 for v in s.members if s.leq(v, u)) for u in s.members}
    return NodeLabeling(tuple((rank.get(i, 0),) for i in g.nodes), "linear")


def nearly_linear_blocks(s: NodePoset) -> list:
    """Ordered antichains ``S_1, ..., S_l`` whose covers are exactly ``S_i x S_{i+1}``.

    Equivalently the strict order is every ``S_i x S_j`` with ``i < j``.
    Raises :class:`LabelingError` when the relation has another shape.
    """
    members = set(s.members)
    strict = {(u, v) for u, v in s.relation if u != v}
    blocks = []
    remaining = set(members)
    while remaining:
        top = {u for u in remaining if not any((v, u) in strict for v in remaining)}
        blocks.append(sorted(top))
        remaining -= top
    expected = set()
    for i, a in enumerate(blocks):
        for b in blocks[i + 1:]:
            expected.update((u, v) for u in a for v in b)
    if expected != strict:
        raise LabelingError("relation is not a nearly linear order (a chain of antichains "
                            "below every later one)")
    return blocks


def nearly_linear_order_labels(s, g: Graph) -> NodeLabeling:
    s = _members(s, g)
    label = {u: k + 1 for k, block in enumerate(nearly_linear_blocks(s)) for u in block}
    return NodeLabeling(tuple((label.get(i, 0),) for i in g.nodes), "nearly_linear")


# -- subset selection -------------------------------------------------------------

@dataclass(frozen=True)
class SubsetPolicy:
    """How the one-head routine picks the single node to label."""

    kind: str  # "random" | "max_degree" | "least_element"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("random", "max_degree", "least_element"):
            raise ValueError(f"unknown subset policy {self.kind!r}")

    @classmethod
    def random(cls, seed: int = 0) -> "SubsetPolicy":
        return cls("random", seed)


def select_head(s, g: Graph, policy: SubsetPolicy) -> int:
    s = _members(s, g)
    members = sorted(s.members)
    if not members:
        raise LabelingError("cannot pick a head from an empty target")
    if policy.kind == "random":
        key = (policy.seed, tuple(members), g.n)
        return random.Random(repr(key)).choice(members)
    if policy.kind == "max_degree":
        # ties go to the lowest index
        return max(members, key=lambda u: (g.degree(u), -u))
    least = [u for u in members if all(s.leq(u, v) for v in members)]
    if len(least) != 1:
        raise LabelingError("least_element policy needs a poset with a unique least element")
    return least[0]


def one_head_label(s, g: Graph, policy: SubsetPolicy) -> NodeLabeling:
    return subset_zero_one({select_head(s, g, policy)}, g)


class SubsetLabelCache:
    """Share labeled graphs between targets that select the same subset.

    ``get(subset, graph_id, g)`` builds ``subset_zero_one`` at most once per
    ``(subset, graph_id)`` key.
    """

    def __init__(self):
        self._store: dict = {}
        self.hits = 0
        self.misses = 0

    def get(self, subset: Iterable[int], graph_id, g: Graph) -> NodeLabeling:
        key = (frozenset(subset), graph_id)
        lab = self._store.get(key)
        if lab is None:
            self.misses += 1
            lab = self._store[key] = subset_zero_one(set(subset), g)
        else:
            self.hits += 1
        return lab


def _readout_nodes(members: list, p: tuple, readout: str) -> list:
    if readout == "target":
        return members
    if readout == "head":
        return list(p)
    raise ValueError(f"unknown readout {readout!r}; choose 'target' or 'head'")


def _subset_reps_wl(items, k: int, layers, readout: str = "target") -> list:
    graphs, inits, owners, nodes = [], [], [], []
    for idx, (g, s) in enumerate(items):
        members = sorted(s.members)
        for p in combinations(members, k):
            graphs.append(g)
            inits.append(subset_zero_one(set(p), g))
            owners.append(idx)
            nodes.append(_readout_nodes(members, p, readout))
    colorings = wl.refine_batch(graphs, inits, layers)
    reps = [[] for _ in items]
    for c, idx, read in zip(colorings, owners, nodes):
        reps[idx].append(tuple(sorted(c.color(u) for u in read)))
    return [sorted(r) for r in reps]


def _subset_reps_oracle(items, k: int, readout: str = "target") -> list:
    reps = []
    for g, s in items:
        members = sorted(s.members)
        reps.append(sorted(
            tuple(sorted(iso.node_codes(g, _readout_nodes(members, p, readout),
                                        labels=subset_zero_one(set(p), g).labels)))
            for p in combinations(members, k)))
    return reps


def subset_pooling_distinguishes(g1: Graph, s1, g2: Graph, s2, k: int,
                                 engine: str = "wl", layers=wl.CONVERGE,
                                 readout: str = "target") -> bool:
    """Compare the pooled representations over all size-``k`` subsets P.

    For each P the graph is subset-labeled and read out as a multiset of node
    representations: of every target member (``readout="target"``) or of the
    labeled nodes only (``readout="head"``, e.g. ``u`` in ``A^(u)`` for
    ``k=1``).  ``engine="wl"`` uses joint 1-WL colours, ``engine="oracle"``
    canonical node codes.
    """
    s1, s2 = as_poset(s1), as_poset(s2)
    if k > max(len(s1.members), len(s2.members)):
        raise LabelingError(f"subset size {k} exceeds the target size")
    if len(s1.members) != len(s2.members):
        return True
    if engine == "oracle":
        r1, r2 = _subset_reps_oracle([(g1, s1), (g2, s2)], k, readout)
    elif engine == "wl":
        r1, r2 = _subset_reps_wl([(g1, s1), (g2, s2)], k, layers, readout)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return r1 != r2


def set_labeling_distinguishes(g1: Graph, s1, g2: Graph, s2, trick=zero_one,
                               engine: str = "wl", layers=wl.CONVERGE) -> bool:
    """Whether a set labeling plus the engine separates two targets.

    ``engine="wl"`` aggregates the targets' joint 1-WL colours on the labeled
    graphs; ``engine="oracle"`` aggregates their canonical node codes.
    """
    s1, s2 = as_poset(s1), as_poset(s2)
    l1, l2 = trick(s1, g1), trick(s2, g2)
    if engine == "wl":
        return wl.wl_distinguishes(g1, l1, s1, g2, l2, s2, layers)
    if g1.n != g2.n or len(s1.members) != len(s2.members):
        return True
    c1 = sorted(iso.node_codes(g1, sorted(s1.members), labels=l1.labels))
    c2 = sorted(iso.node_codes(g2, sorted(s2.members), labels=l2.labels))
    return c1 != c2


# -- validation ------------------------------------------------------------------

@dataclass(frozen=True)
class TrickSpec:
    """A named trick with the kind of target it accepts."""

    name: str
    fn: Callable
    kind: str = "set"          # "set" | "poset" | "subset"
    targets: str = "any"       # "any" | "pair" | "chain" | "nearly_linear" | "poset"
    directed: bool = False


def _broken_min_index(s, g: Graph) -> NodeLabeling:
    s = _members(s, g)
    first = min(s.members) if s.members else None
    return NodeLabeling(tuple(((1 if i == first else 2) if i in s.members else 0,)
                              for i in g.nodes), "broken_min_index")


TRICKS = {
    "zero_one": TrickSpec("zero_one", zero_one),
    "drnl": TrickSpec("drnl", drnl, targets="pair"),
    "de": TrickSpec("de", distance_encoding),
    "de_plus": TrickSpec("de_plus", de_plus),
    "hasse": TrickSpec("hasse", hasse_embedding, kind="poset", targets="poset", directed=True),
    "linear": TrickSpec("linear", linear_order_labels, kind="poset", targets="chain", directed=True),
    "nearly_linear": TrickSpec("nearly_linear", nearly_linear_order_labels, kind="poset",
                               targets="nearly_linear", directed=True),
    "subset_zero_one": TrickSpec("subset_zero_one", subset_zero_one, kind="subset"),
}

BROKEN_TRICK = TrickSpec("broken_min_index", _broken_min_index)


def get_trick(name: str) -> TrickSpec:
    try:
        return TRICKS[name]
    except KeyError:
        raise ValueError(f"unknown labeling {name!r}; choose from {', '.join(TRICKS)}") from None


def _random_target(spec: TrickSpec, n: int, rng: random.Random) -> NodePoset:
    nodes = list(range(1, n + 1))
    if spec.targets == "pair":
        return NodePoset.of_set(rng.sample(nodes, 2))
    size = rng.randint(1, min(n, 4))
    picked = rng.sample(nodes, size)
    if spec.targets == "any":
        return NodePoset.of_set(picked)
    if spec.targets == "chain":
        return NodePoset.chain(picked)
    if spec.targets == "nearly_linear":
        cuts = sorted(rng.sample(range(1, size), rng.randint(0, size - 1))) if size > 1 else []
        blocks, prev = [], 0
        for c in cuts + [size]:
            blocks.append(picked[prev:c])
            prev = c
        pairs = [(u, v) for a, b in zip(blocks, blocks[1:]) for u in a for v in b]
        return NodePoset.from_pairs(pairs, picked)
    # uniform over labeled posets on the picked members
    shape = rng.choice(_poset_shapes(size))
    return NodePoset.from_pairs([(picked[a], picked[b]) for a, b in shape], picked)


@lru_cache(maxsize=None)
def _poset_shapes(size: int) -> tuple:
    """Every strict partial order on ``0..size-1`` as a tuple of pairs."""
    cand = list(permutations(range(size), 2))
    out = []
    for mask in range(1 << len(cand)):
        rel = {cand[k] for k in range(len(cand)) if mask >> k & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if all((a, d) in rel for a, b in rel for c, d in rel if b == c):
            out.append(tuple(sorted(rel)))
    return tuple(out)


@dataclass
class ValidationReport:
    trick: str
    trials: int
    equivariance_violations: list = field(default_factory=list)
    distinguishing_violations: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return len(self.equivariance_violations) + len(self.distinguishing_violations)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {"trick": self.trick, "trials": self.trials, "violations": self.violations,
                "equivariance_violations": self.equivariance_violations[:10],
                "distinguishing_violations": self.distinguishing_violations[:10]}


def _label_matrix(lab: NodeLabeling, table: dict) -> np.ndarray:
    return np.array([table[r] for r in lab.labels], dtype=np.int64)


def _label_preserving_perms_map(l1: NodeLabeling, s1: NodePoset, l2: NodeLabeling,
                                s2: NodePoset, n: int, check_order: bool):
    """First permutation preserving labels but not mapping ``s2`` onto ``s1``, if any."""
    table = {r: k for k, r in enumerate(sorted(set(l1.labels) | set(l2.labels)))}
    a1, a2 = _label_matrix(l1, table), _label_matrix(l2, table)
    if sorted(a1.tolist()) != sorted(a2.tolist()):
        return None
    perms = iso._all_perms(n)
    # sigma[k] = node of the second labeling sent to position k of the first
    ok = np.all(a2[perms] == a1[None, :], axis=1)
    mem1 = np.array([i in s1.members for i in range(1, n + 1)])
    mem2 = np.array([i in s2.members for i in range(1, n + 1)])
    good = np.all(mem2[perms] == mem1[None, :], axis=1)
    if check_order:
        r1 = np.zeros((n, n), dtype=bool)
        r2 = np.zeros((n, n), dtype=bool)
        for u, v in s1.relation:
            r1[u - 1, v - 1] = True
        for u, v in s2.relation:
            r2[u - 1, v - 1] = True
        good &= np.all(r2[perms[:, :, None], perms[:, None, :]] == r1[None], axis=(1, 2))
    bad = np.nonzero(ok & ~good)[0]
    if len(bad) == 0:
        return None
    sigma = perms[bad[0]]
    return [int(sigma[k]) + 1 for k in range(n)]


def validate_labeling_trick(trick, trials: int = 500, n_max: int = 7, seed: int = 0) -> ValidationReport:
    """Empirically check permutation equivariance and target distinguishing.

    ``trick`` is a :class:`TrickSpec` or a registered name.  Violations are
    recorded verbatim in the report rather than raised.
    """
    spec = get_trick(trick) if isinstance(trick, str) else trick
    rng = random.Random(seed)
    report = ValidationReport(spec.name, trials)
    check_order = spec.kind == "poset"
    for t in range(trials):
        n = rng.randint(2 if spec.targets == "pair" else 1, n_max)
        g = random_graph(n, rng.uniform(0.2, 0.7), rng, directed=spec.directed)
        s = _random_target(spec, n, rng)
        p = Permutation.random(n, rng)
        lab = spec.fn(s, g)
        moved = spec.fn(permute_poset(s, p), apply_permutation(g, p))
        if moved.labels != lab.permute(p).labels:
            report.equivariance_violations.append(
                {"trial": t, "graph": g.undirected_edges(), "n": n, "target": repr(s),
                 "perm": list(p.mapping), "labels": lab.labels, "permuted_labels": moved.labels})
        # a second target on the same graph or on an isomorphic copy
        if rng.random() < 0.5:
            q = Permutation.random(n, rng)
            g2, s2 = apply_permutation(g, q), permute_poset(s, q)
        else:
            g2, s2 = g, _random_target(spec, n, rng)
        lab2 = spec.fn(s2, g2)
        sigma = _label_preserving_perms_map(lab, s, lab2, s2, n, check_order)
        if sigma is not None:
            report.distinguishing_violations.append(
                {"trial": t, "n": n, "target": repr(s), "other_target": repr(s2),
                 "perm": sigma})
    return report


def label_counts(lab: NodeLabeling) -> Counter:
    return Counter(lab.labels)
