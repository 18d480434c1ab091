import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from labelkit import iso
from labelkit.graph import (Graph, GraphError, Hypergraph, NodePoset, Permutation, PosetError,
                            apply_permutation, complete_graph, cycle_graph, disjoint_union,
                            enclosing_subgraph, hasse_diagram, incidence_graph, path_graph,
                            permute_poset, random_graph, star_graph, transitive_closure)


def brute_isomorphic(s1, g1, s2, g2):
    """Independent oracle: try every permutation on plain Python sets."""
    if g1.n != g2.n:
        return False
    for perm in permutations(range(1, g1.n + 1)):
        p = dict(zip(range(1, g1.n + 1), perm))
        if {(p[u], p[v]) for u, v in g2.edges} != set(g1.edges):
            continue
        if {(p[u], p[v]) for u, v in s2.relation} == set(s1.relation) and \
                {p[u] for u in s2.members} == set(s1.members):
            return True
    return False


def test_edges_out_of_range_rejected():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(1, 4)])


def test_undirected_edges_symmetric():
    g = Graph.from_edges(3, [(1, 2), (3, 2)])
    assert g.has_edge(2, 1) and g.has_edge(2, 3)
    assert g.num_edges == 2


def test_identity_permutation_keeps_graph():
    g = random_graph(6, 0.5, random.Random(1))
    assert apply_permutation(g, Permutation.identity(6)) == g


def test_swap_on_single_edge():
    g = Graph.from_edges(2, [(1, 2)], directed=True)
    swapped = apply_permutation(g, Permutation((2, 1)))
    assert swapped.has_edge(2, 1) and not swapped.has_edge(1, 2)


def test_rotation_of_c6_is_isomorphic():
    c6 = cycle_graph(6)
    rot = Permutation(tuple(i % 6 + 1 for i in range(1, 7)))
    empty = NodePoset.of_set([])
    assert iso.are_substructures_isomorphic(empty, c6, empty, apply_permutation(c6, rot))


def test_permutation_size_mismatch():
    with pytest.raises(GraphError):
        apply_permutation(cycle_graph(4), Permutation.identity(5))


@pytest.mark.parametrize("a,b,expected", [({1, 2}, {2, 3}, True), ({1, 2}, {1, 3}, False),
                                          ({1, 3}, {2, 4}, True), ({1, 4}, {1, 3}, False)])
def test_c6_link_isomorphism(a, b, expected):
    c6 = cycle_graph(6)
    s1, s2 = NodePoset.of_set(a), NodePoset.of_set(b)
    assert iso.are_substructures_isomorphic(s1, c6, s2, c6) is expected
    assert brute_isomorphic(s1, c6, s2, c6) is expected


def test_oracle_bound_is_explicit():
    big = cycle_graph(9)
    with pytest.raises(iso.OracleUnavailable):
        iso.canonical_code(NodePoset.of_set([1]), big)


def test_canonical_code_examples():
    c6 = cycle_graph(6)
    assert iso.canonical_code({1}, c6) == iso.canonical_code({4}, c6)
    assert iso.canonical_code({1, 2}, c6) != iso.canonical_code({1, 3}, c6)


def test_canonical_code_agrees_with_brute_force():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(2, 6)
        g1 = random_graph(n, 0.5, rng, directed=rng.random() < 0.3)
        g2 = g1 if rng.random() < 0.5 else random_graph(n, 0.5, rng, directed=g1.directed)
        members = rng.sample(range(1, n + 1), rng.randint(1, n))
        s1 = NodePoset.chain(members) if rng.random() < 0.3 else NodePoset.of_set(members)
        q = Permutation.random(n, rng)
        if rng.random() < 0.5:
            g2, s2 = apply_permutation(g1, q), permute_poset(s1, q)
        else:
            s2 = NodePoset.of_set(rng.sample(range(1, n + 1), len(members)))
        expected = brute_isomorphic(s1, g1, s2, g2)
        assert (iso.canonical_code(s1, g1) == iso.canonical_code(s2, g2)) is expected
        assert iso.are_substructures_isomorphic(s1, g1, s2, g2) is expected


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 30))
def test_group_action_composes(n, seed):
    rng = random.Random(seed)
    g = random_graph(n, 0.5, rng, directed=True)
    p, q = Permutation.random(n, rng), Permutation.random(n, rng)
    assert apply_permutation(apply_permutation(g, p), q) == apply_permutation(g, q.compose(p))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 30))
def test_canonical_code_permutation_invariant(n, seed):
    rng = random.Random(seed)
    g = random_graph(n, 0.5, rng)
    s = NodePoset.of_set(rng.sample(range(1, n + 1), rng.randint(0, n)))
    p = Permutation.random(n, rng)
    assert iso.canonical_code(s, g) == iso.canonical_code(permute_poset(s, p), apply_permutation(g, p))


def test_isomorphism_is_an_equivalence():
    rng = random.Random(11)
    empty = NodePoset.of_set([])
    graphs = [random_graph(5, 0.5, rng) for _ in range(12)]
    same = lambda a, b: iso.are_substructures_isomorphic(empty, a, empty, b)
    for a in graphs:
        assert same(a, a)
    for _ in range(40):
        a, b, c = rng.sample(graphs, 3)
        assert same(a, b) == same(b, a)
        if same(a, b) and same(b, c):
            assert same(a, c)


# -- posets and Hasse diagrams -----------------------------------------------------------

def test_poset_axioms_checked():
    with pytest.raises(PosetError):
        NodePoset(frozenset({1, 2}), frozenset({(1, 1), (2, 2), (1, 2), (2, 1)}))
    with pytest.raises(PosetError):
        NodePoset(frozenset({1, 2, 3}), frozenset({(1, 1), (2, 2), (3, 3), (1, 2), (2, 3)}))


def test_hasse_antichain_has_no_edges():
    diagram, order = hasse_diagram(NodePoset.of_set([4, 5, 6]))
    assert diagram.n == 3 and not diagram.edges


def test_hasse_chain_drops_transitive_edge():
    diagram, order = hasse_diagram(NodePoset.chain([7, 8, 9]))
    idx = {u: k + 1 for k, u in enumerate(order)}
    assert diagram.edges == {(idx[7], idx[8]), (idx[8], idx[9])}


def test_hasse_link_is_single_arc():
    diagram, order = hasse_diagram(NodePoset.chain([3, 1]))
    idx = {u: k + 1 for k, u in enumerate(order)}
    assert diagram.edges == {(idx[3], idx[1])}


def test_hasse_round_trip():
    rng = random.Random(5)
    for _ in range(50):
        members = rng.sample(range(1, 9), rng.randint(1, 5))
        pairs = [(a, b) for i, a in enumerate(members) for b in members[i + 1:] if rng.random() < 0.4]
        s = NodePoset.from_pairs(pairs, members)
        diagram, order = hasse_diagram(s)
        back = [(order[u - 1], order[v - 1]) for u, v in diagram.edges]
        assert transitive_closure(back, members) == s.relation


# -- enclosing subgraphs ------------------------------------------------------------------

def test_enclosing_h0_keeps_targets():
    g = cycle_graph(6)
    sub, s, index = enclosing_subgraph(g, {1, 2}, 0)
    assert sub.n == 2 and sub.num_edges == 1


def test_enclosing_c6_one_hop_is_path():
    sub, s, index = enclosing_subgraph(cycle_graph(6), {1}, 1)
    assert set(index) == {6, 1, 2}
    assert iso.are_substructures_isomorphic(s, sub, NodePoset.of_set([2]), path_graph(3))


def test_enclosing_infinite_hop_is_whole_graph():
    g = random_graph(7, 0.3, random.Random(2))
    assert enclosing_subgraph(g, {1}, float("inf"))[0] is g


def test_enclosing_monotone_in_h():
    rng = random.Random(8)
    for _ in range(20):
        g = random_graph(12, 0.2, rng)
        prev = set()
        for h in range(5):
            nodes = set(enclosing_subgraph(g, {1, 2}, h)[2])
            assert prev <= nodes
            prev = nodes


# -- hypergraphs --------------------------------------------------------------------------

def test_incidence_graph_star():
    h = Hypergraph.from_hyperedges(3, [[1, 2, 3]])
    ig = incidence_graph(h)
    assert ig.n == 4 and set(ig.undirected_edges()) == {(1, 4), (2, 4), (3, 4)}
    assert [f[-1] for f in ig.node_features] == [1, 1, 1, 0]


def test_incidence_graph_without_hyperedges():
    ig = incidence_graph(Hypergraph.from_hyperedges(3, []))
    assert ig.n == 3 and not ig.edges


def test_empty_hyperedge_rejected():
    with pytest.raises(GraphError):
        Hypergraph(2, ((0,), (0,)))


def test_permuted_hypergraph_incidence_isomorphic():
    rng = random.Random(4)
    for _ in range(20):
        h = Hypergraph.from_hyperedges(4, [rng.sample(range(1, 5), rng.randint(1, 4))
                                           for _ in range(3)])
        moved = h.permute(Permutation.random(4, rng), Permutation.random(3, rng))
        empty = NodePoset.of_set([])
        assert iso.are_substructures_isomorphic(empty, incidence_graph(h), empty,
                                                incidence_graph(moved))


def test_hyperedge_renumbering_is_isomorphic_both_ways():
    h1 = Hypergraph.from_hyperedges(3, [[1, 2], [2, 3]])
    h2 = Hypergraph.from_hyperedges(3, [[2, 3], [1, 2]])
    s = NodePoset.of_set([1])
    assert iso.are_hypergraphs_isomorphic(s, h1, s, h2)
    assert iso.are_substructures_isomorphic(s, incidence_graph(h1), s, incidence_graph(h2))


def test_hyperedges_example_non_isomorphic():
    h1 = Hypergraph.from_hyperedges(3, [[1, 2], [1, 2, 3]])
    h2 = Hypergraph.from_hyperedges(3, [[1, 2], [2, 3]])
    empty = NodePoset.of_set([])
    assert not iso.are_hypergraphs_isomorphic(empty, h1, empty, h2)
    assert not iso.are_substructures_isomorphic(empty, incidence_graph(h1), empty,
                                                incidence_graph(h2))


def test_hypergraph_code_matches_brute_force():
    rng = random.Random(9)
    for _ in range(150):
        n, m = rng.randint(1, 4), rng.randint(1, 3)
        edges = lambda: [rng.sample(range(1, n + 1), rng.randint(1, n)) for _ in range(m)]
        h1 = Hypergraph.from_hyperedges(n, edges())
        h2 = h1.permute(Permutation.random(n, rng), Permutation.random(m, rng)) \
            if rng.random() < 0.5 else Hypergraph.from_hyperedges(n, edges())
        s = NodePoset.of_set([1])
        same = iso.hypergraph_canonical_code(s, h1) == iso.hypergraph_canonical_code(s, h2)
        assert same == iso.are_hypergraphs_isomorphic(s, h1, s, h2)


def test_small_constructors():
    assert complete_graph(4).num_edges == 6
    assert star_graph(3).degree(1) == 3
    assert disjoint_union(complete_graph(3), complete_graph(3)).num_edges == 6
