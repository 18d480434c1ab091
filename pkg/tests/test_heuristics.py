import math
import random
from fractions import Fraction

import pytest

from labelkit import heuristics as hz
from labelkit.graph import Graph, complete_graph, cycle_graph, path_graph, random_graph, star_graph


def test_common_neighbours_on_c6():
    c6 = cycle_graph(6)
    assert hz.common_neighbors(c6, 1, 3) == 1
    assert hz.common_neighbors(c6, 1, 4) == 0
    assert hz.common_neighbors(c6, 1, 2) == 0


def test_resource_allocation_is_exact():
    k4 = complete_graph(4)
    assert hz.resource_allocation(k4, 1, 2).value == Fraction(2, 3)


def test_adamic_adar_value():
    k4 = complete_graph(4)
    assert math.isclose(hz.adamic_adar(k4, 1, 2).value, 2 / math.log(3))
    assert float(hz.adamic_adar(cycle_graph(6), 1, 4)) == 0.0


def test_adamic_adar_on_path():
    g = path_graph(3)
    assert hz.common_neighbors(g, 1, 3) == 1
    assert hz.scores(g, 1, 3)["aa"] == pytest.approx(1 / math.log(2))
    assert hz.scores(Graph.from_edges(3, [(1, 2)]), 1, 3)["aa"] == 0.0


def test_adamic_adar_undefined_reports_nan():
    # the shared out-neighbour 2 has out-degree one, so log(1) = 0
    g = Graph.from_edges(3, [(1, 2), (3, 2), (2, 1)], directed=True)
    with pytest.raises(hz.HeuristicDomainError):
        hz.adamic_adar(g, 1, 3)
    assert math.isnan(hz.scores(g, 1, 3)["aa"])


def test_same_node_rejected():
    with pytest.raises(hz.HeuristicDomainError):
        hz.scores(path_graph(3), 2, 2)
    with pytest.raises(hz.HeuristicDomainError):
        hz.common_neighbors(path_graph(3), 1, 9)


def brute_cn(g, i, j):
    return sum(1 for v in g.nodes if g.has_edge(i, v) and g.has_edge(j, v))


def test_cn_matches_brute_force():
    rng = random.Random(0)
    for _ in range(50):
        g = random_graph(rng.randint(2, 15), 0.3, rng)
        i, j = rng.sample(g.nodes, 2)
        assert hz.common_neighbors(g, i, j) == brute_cn(g, i, j)


def test_labeled_colours_determine_heuristics():
    rng = random.Random(1)
    for _ in range(10):
        g = random_graph(30, 0.12, rng)
        pairs = [tuple(rng.sample(g.nodes, 2)) for _ in range(80)]
        report = hz.heuristic_refinement_check(g, pairs, h=3)
        assert report.ok, report.violations[:3]


def test_c6_witness_for_plain_wl():
    report = hz.heuristic_refinement_check(cycle_graph(6), [(1, 3), (1, 4)], h=3)
    assert report.ok and report.labeled_equal == 0
    assert report.failure_witnesses == [{"pair_a": (1, 3), "pair_b": (1, 4), "cn": [1, 0]}]


def test_refinement_check_needs_two_rounds():
    with pytest.raises(ValueError):
        hz.heuristic_refinement_check(star_graph(3), [(2, 3)], h=1)
