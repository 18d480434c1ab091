import random

import pytest
from hypothesis import given, settings, strategies as st

from labelkit import wl
from labelkit.audit import enumerate_graphs
from labelkit.graph import (Graph, NodePoset, Permutation, apply_permutation, complete_graph,
                            cycle_graph, disjoint_union, random_graph, star_graph)
from labelkit.labeling import zero_one

C6 = cycle_graph(6)
TWO_K3 = disjoint_union(complete_graph(3), complete_graph(3))


def partition(colors):
    groups = {}
    for i, c in enumerate(colors, start=1):
        groups.setdefault(c, set()).add(i)
    return sorted(map(frozenset, groups.values()), key=min)


def test_c6_is_one_colour():
    col = wl.wl_refine(C6, layers=4)
    assert all(len(set(r)) == 1 for r in col.rounds)


def test_star_two_colours_after_one_round():
    col = wl.wl_refine(star_graph(3), layers=1)
    assert partition(col.rounds[1]) == [{1}, {2, 3, 4}]


def test_c6_zero_one_split():
    col = wl.wl_refine(C6, zero_one({1, 2}, C6), layers=2)
    assert partition(col.rounds[0]) == [{1, 2}, {3, 4, 5, 6}]
    assert partition(col.rounds[1]) == [{1, 2}, {3, 6}, {4, 5}]


def test_wl_distinguishes_c6_links():
    a, b = NodePoset.of_set({1, 2}), NodePoset.of_set({1, 3})
    assert not wl.wl_distinguishes(C6, None, a, C6, None, b)
    assert wl.wl_distinguishes(C6, zero_one(a, C6), a, C6, zero_one(b, C6), b)
    assert not wl.wl_distinguishes(C6, None, a, C6, None, a)


def test_directed_uses_in_and_out():
    g = Graph.from_edges(3, [(1, 2), (2, 3)], directed=True)
    col = wl.wl_refine(g, layers=1)
    assert len(set(col.rounds[1])) == 3


def test_refinement_is_monotone():
    rng = random.Random(0)
    for _ in range(30):
        g = random_graph(rng.randint(2, 12), 0.3, rng)
        col = wl.wl_refine(g)
        for before, after in zip(col.rounds, col.rounds[1:]):
            for block in partition(after):
                assert len({before[i - 1] for i in block}) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2 ** 30))
def test_refinement_permutation_invariant(n, seed):
    rng = random.Random(seed)
    g = random_graph(n, 0.4, rng)
    s = set(rng.sample(range(1, n + 1), rng.randint(0, n)))
    p = Permutation.random(n, rng)
    c1, c2 = wl.refine_batch([g, apply_permutation(g, p)], [zero_one(s, g), zero_one({p(u) for u in s},
                                                                                    apply_permutation(g, p))])
    assert all(c1.color(i) == c2.color(p(i)) for i in g.nodes)


def test_refinement_is_deterministic():
    g = random_graph(10, 0.3, random.Random(4))
    assert wl.wl_refine(g).rounds == wl.wl_refine(g).rounds


def test_wl_never_separates_isomorphic_targets():
    rng = random.Random(2)
    for n in range(2, 8):
        for g in rng.sample(enumerate_graphs(n), min(15, len(enumerate_graphs(n)))):
            s1 = NodePoset.of_set(rng.sample(range(1, n + 1), 2))
            p = Permutation.random(n, rng)
            g2 = apply_permutation(g, p)
            s2 = NodePoset.of_set({p(u) for u in s1.members})
            assert not wl.wl_distinguishes(g, zero_one(s1, g), s1, g2, zero_one(s2, g2), s2)


def test_interner_ids_ignore_node_order():
    rng = random.Random(7)
    g = random_graph(9, 0.4, rng)
    p = Permutation.random(9, rng)
    h1 = wl.ColorInterner().refine(g, None, 3)
    h2 = wl.ColorInterner().refine(apply_permutation(g, p), None, 3)
    for r1, r2 in zip(h1, h2):
        assert all(r1[i - 1] == r2[p(i) - 1] for i in g.nodes)


def test_frozen_interner_reports_unknown():
    it = wl.ColorInterner()
    it.refine(C6, None, 1)
    it.frozen = True
    assert -1 in it.refine(star_graph(3), None, 1)[1]


# -- k-WL ------------------------------------------------------------------------------------

def test_2wl_ties_c6_and_two_triangles():
    a, b = wl.kwl_graph_colors([C6, TWO_K3], 2)
    assert a == b
    assert not wl.wl_graph_distinguishes(C6, None, TWO_K3, None)


def test_3wl_separates_c6_and_two_triangles():
    a, b = wl.kwl_graph_colors([C6, TWO_K3], 3)
    assert a != b


def test_2wl_isomorphic_random_graphs():
    rng = random.Random(1)
    g = random_graph(6, 0.5, rng)
    a, b = wl.kwl_graph_colors([g, apply_permutation(g, Permutation.random(6, rng))], 2)
    assert a == b


def test_kwl_budget():
    with pytest.raises(wl.BudgetExceeded):
        wl.kwl_refine(cycle_graph(11), 2)


def test_2wl_matches_1wl_on_small_graphs():
    graphs = [g for n in range(1, 6) for g in enumerate_graphs(n, connected=False)]
    colors = wl.kwl_graph_colors(graphs, 2)
    one = wl.refine_batch(graphs)
    hists = [(g.n, tuple(sorted(c.colors))) for g, c in zip(graphs, one)]
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            assert (colors[i] == colors[j]) == (hists[i] == hists[j])


def test_pooling_c6_vs_two_triangles():
    pooled = [wl.kwl_l_pooling(g, 2, 1) for g in (C6, TWO_K3)]
    _, graph_colors = wl.kwl_l_pooling_batch([C6, TWO_K3], 2, 1)
    assert graph_colors[0] == graph_colors[1]
    assert pooled[0].shape == (6,)


def test_pooling_star_center_differs():
    pooled = wl.kwl_l_pooling(star_graph(3), 2, 1)
    assert pooled[0] != pooled[1] and len(set(pooled[1:].tolist())) == 1


def test_pooling_invariant_under_permutation():
    rng = random.Random(3)
    g = random_graph(6, 0.5, rng)
    _, gc = wl.kwl_l_pooling_batch([g, apply_permutation(g, Permutation.random(6, rng))], 2, 1)
    assert gc[0] == gc[1]


def test_kl_wl_separates_c6_and_two_triangles():
    _, graph_colors = wl.kl_wl_batch([C6, TWO_K3], 2, 1)
    assert graph_colors[0] != graph_colors[1]


def test_kl_wl_identical_tuples():
    per, _ = wl.kl_wl_batch([C6, C6], 2, 1, [[(1,)], [(4,)]])
    assert per[0][(1,)] == per[1][(4,)]
