import math
import random

import pytest

from labelkit import labeling as lb
from labelkit.graph import (Graph, NodePoset, Permutation, apply_permutation, complete_graph,
                            cycle_graph, disjoint_union, path_graph, permute_poset, random_graph,
                            star_graph)

C6 = cycle_graph(6)


def drnl_rank_oracle(d_max):
    """Number unordered distance pairs by (sum, smaller), starting at 2."""
    pairs = sorted({(min(a, b), max(a, b)) for a in range(1, d_max) for b in range(1, d_max)
                    if a + b <= d_max}, key=lambda p: (p[0] + p[1], p[0]))
    return {p: k + 2 for k, p in enumerate(pairs)}


def partition(lab):
    groups = {}
    for i, row in enumerate(lab.labels, start=1):
        groups.setdefault(row, set()).add(i)
    return {frozenset(v) for v in groups.values()}


def test_zero_one_marks_members():
    assert [r[0] for r in lb.zero_one({1, 3}, path_graph(4)).labels] == [1, 0, 1, 0]


def test_target_outside_graph_rejected():
    with pytest.raises(Exception):
        lb.zero_one({7}, C6)


@pytest.mark.parametrize("dx,dy,expected", [(1, 1, 2), (1, 2, 3), (2, 2, 5), (2, 1, 3),
                                            (1, 3, 4), (3, 4, 13)])
def test_drnl_hash_values(dx, dy, expected):
    assert lb.drnl_label(dx, dy) == expected


def test_drnl_matches_rank_enumeration():
    table = drnl_rank_oracle(20)
    for (a, b), rank in table.items():
        assert lb.drnl_label(a, b) == lb.drnl_label(b, a) == rank


def test_drnl_unreachable_is_zero():
    assert lb.drnl_label(math.inf, 2) == 0


def test_drnl_on_path_masks_other_target():
    # path 1-2-3-4 with targets 2, 3: node 1 reaches 3 only through 2
    lab = lb.drnl({2, 3}, path_graph(4))
    assert [r[0] for r in lab.labels] == [0, 1, 1, 0]
    unmasked = lb.drnl({2, 3}, path_graph(4), mask=False)
    assert unmasked[1] == (lb.drnl_label(1, 2),)


def test_drnl_needs_a_pair():
    with pytest.raises(lb.LabelingError):
        lb.drnl({1, 2, 3}, C6)


def test_de_c6_example():
    lab = lb.distance_encoding({1, 4}, C6)
    assert lab[2] == (1, 2)
    assert lab[1] == (0, 3)
    assert lb.distance_encoding({1, 4}, C6, d_max=1)[2] == (1, 1)


def test_de_plus_refines_drnl():
    rng = random.Random(6)
    for _ in range(60):
        g = random_graph(rng.randint(3, 10), 0.3, rng)
        s = set(rng.sample(g.nodes, 2))
        dp, dr = lb.de_plus(s, g), lb.drnl(s, g)
        for block in partition(dp):
            assert len({dr[i] for i in block}) == 1
        # on nodes reaching both targets the partitions coincide
        both = [i for i in g.nodes if i not in s and -1 not in dp[i]]
        assert len({dp[i] for i in both}) == len({dr[i] for i in both})


def test_linear_order_labels_chain():
    lab = lb.linear_order_labels(NodePoset.chain([7, 3, 5]), cycle_graph(8))
    assert (lab[7], lab[3], lab[5], lab[1]) == ((1,), (2,), (3,), (0,))


def test_linear_rejects_antichain():
    with pytest.raises(lb.LabelingError):
        lb.linear_order_labels(NodePoset.of_set({1, 2}), C6)


def test_nearly_linear_leader():
    a, b, c = 1, 2, 3
    s = NodePoset.from_pairs([(a, b), (a, c)], [a, b, c])
    lab = lb.nearly_linear_order_labels(s, C6)
    assert (lab[a], lab[b], lab[c]) == ((1,), (2,), (2,))
    assert lb.nearly_linear_blocks(s) == [[1], [2, 3]]


def test_nearly_linear_rejects_other_shapes():
    v = NodePoset.from_pairs([(1, 3), (2, 3), (2, 4)], [1, 2, 3, 4])
    with pytest.raises(lb.LabelingError):
        lb.nearly_linear_order_labels(v, complete_graph(4))


def test_hasse_source_and_target_roles():
    g = path_graph(3, directed=True)
    lab = lb.hasse_embedding(NodePoset.chain([1, 2]), g)
    assert lab[1] != lab[2] and lab[3] == (0,)
    flipped = lb.hasse_embedding(NodePoset.chain([2, 1]), g)
    assert flipped[2] == lab[1] and flipped[1] == lab[2]


def test_hasse_two_disjoint_chains_defect():
    # a<b and c<d on an edgeless graph: swapping a and c keeps every label
    g = Graph.from_edges(4, [])
    s = NodePoset.from_pairs([(1, 2), (3, 4)], [1, 2, 3, 4])
    lab = lb.hasse_embedding(s, g)
    swap = Permutation((3, 2, 1, 4))
    assert lab.permute(swap).labels == lab.labels
    assert permute_poset(s, swap) != s


def test_subset_and_one_head():
    s = NodePoset.of_set({2, 4, 5})
    assert lb.subset_zero_one({4}, C6)[4] == (1,)
    g = star_graph(4)
    assert lb.select_head({1, 3}, g, lb.SubsetPolicy("max_degree")) == 1
    assert lb.select_head(s, C6, lb.SubsetPolicy("max_degree")) == 2
    pick = lb.select_head(s, C6, lb.SubsetPolicy.random(3))
    assert pick in s.members and pick == lb.select_head(s, C6, lb.SubsetPolicy.random(3))


def test_least_element_picks_source():
    assert lb.select_head(NodePoset.chain([5, 2]), C6, lb.SubsetPolicy("least_element")) == 5
    with pytest.raises(lb.LabelingError):
        lb.select_head(NodePoset.of_set({1, 2}), C6, lb.SubsetPolicy("least_element"))


def test_unknown_policy_and_trick():
    with pytest.raises(ValueError):
        lb.SubsetPolicy("median")
    with pytest.raises(ValueError, match="zero_one"):
        lb.get_trick("nope")


def test_subset_label_cache_reuses():
    cache = lb.SubsetLabelCache()
    first = cache.get({1}, "g", C6)
    assert cache.get({1}, "g", C6) is first
    assert (cache.hits, cache.misses) == (1, 1)


def test_c6_vs_two_triangles_subset_pooling():
    whole = NodePoset.of_set(range(1, 7))
    two_k3 = disjoint_union(complete_graph(3), complete_graph(3))
    assert lb.subset_pooling_distinguishes(C6, whole, two_k3, whole, 1)
    assert lb.subset_pooling_distinguishes(C6, whole, two_k3, whole, 1, engine="oracle")
    assert not lb.set_labeling_distinguishes(C6, whole, two_k3, whole)


def test_subset_pooling_rejects_large_k():
    with pytest.raises(lb.LabelingError):
        lb.subset_pooling_distinguishes(C6, {1, 2}, C6, {1, 3}, 3)


def test_set_labeling_engines_agree_on_c6_links():
    for engine in ("wl", "oracle"):
        assert lb.set_labeling_distinguishes(C6, {1, 2}, C6, {1, 3}, engine=engine)
        assert not lb.set_labeling_distinguishes(C6, {1, 2}, C6, {3, 4}, engine=engine)


@pytest.mark.parametrize("name", sorted(lb.TRICKS))
def test_tricks_are_equivariant(name):
    spec = lb.get_trick(name)
    rng = random.Random(name)
    for _ in range(40):
        n = rng.randint(2, 7)
        g = random_graph(n, 0.4, rng, directed=spec.directed)
        s = lb._random_target(spec, n, rng)
        p = Permutation.random(n, rng)
        assert spec.fn(permute_poset(s, p), apply_permutation(g, p)).labels == \
            spec.fn(s, g).permute(p).labels


@pytest.mark.parametrize("name", [t for t in lb.TRICKS if t != "hasse"])
def test_validator_clean_for_sound_tricks(name):
    assert lb.validate_labeling_trick(name, trials=150, seed=0).ok


def test_validator_flags_broken_trick():
    report = lb.validate_labeling_trick(lb.BROKEN_TRICK, trials=100, seed=0)
    assert report.equivariance_violations
    assert report.as_dict()["violations"] == report.violations


def test_validator_reports_hasse_defect():
    assert lb.validate_labeling_trick("hasse", trials=500, seed=1).distinguishing_violations


def test_poset_shapes_counts():
    assert [len(lb._poset_shapes(k)) for k in range(1, 5)] == [1, 3, 19, 219]


def test_label_csv_and_dense():
    lab = lb.distance_encoding({1, 4}, C6)
    assert lab.to_csv().splitlines()[0] == "node,label0,label1"
    # targets get (0, 3), everyone else (1, 2)
    assert [r[0] for r in lab.dense().labels] == [0, 1, 1, 0, 1, 1]
