import json

import pytest

from labelkit import audit
from labelkit.graph import NodePoset, cycle_graph, path_graph


def test_graph_enumeration_counts():
    # connected graphs up to isomorphism on 1..5 nodes
    assert [len(audit.enumerate_graphs(n)) for n in range(1, 6)] == [1, 1, 2, 6, 21]
    assert len(audit.enumerate_graphs(4, connected=False)) == 11


def test_poset_enumeration_counts():
    assert [len(audit.enumerate_posets(range(k))) for k in range(1, 5)] == [1, 3, 19, 219]


def test_theorem1_small_passes():
    res = audit.audit_theorem_1(4, seed=0)
    assert res.passed and res.instances > 1000
    assert res.agreements == res.instances


def test_unlabeled_baseline_fails_and_replays(tmp_path):
    res = audit.audit_theorem_1(4, (2,), trick="none")
    assert res.verdict == "FAIL"
    path = tmp_path / "cx.json"
    path.write_text(json.dumps(res.counterexamples[:5]))
    for cx in json.loads(path.read_text()):
        assert audit.replay(cx)


def test_replay_of_a_passing_instance():
    c6 = cycle_graph(6)
    cx = audit.counterexample("theorem1", "set_equivalence",
                              [c6, NodePoset.of_set({1, 2}), c6, NodePoset.of_set({1, 3})],
                              {"ok": True})
    assert not audit.replay(cx)


def test_set_equivalence_on_c6():
    c6 = cycle_graph(6)
    out = audit.check_set_equivalence(c6, NodePoset.of_set({1, 2}), c6, NodePoset.of_set({3, 4}))
    assert out == {"ok": True, "set_iso": True, "labeled_iso": True, "codes_equal": True}


def test_gae_witness_on_c6():
    assert audit.check_gae_witness(*audit.c6_link_pair())["ok"]
    assert audit.run_audit("gae", n_max=5).details


def test_boosted_pairs_on_c6():
    report = audit.count_boosted_link_pairs(cycle_graph(6), 3)
    assert report.count == 48
    assert report.degree_condition["holds"] is False


def test_degree_condition_fields():
    cond = audit.degree_condition(path_graph(4), 1)
    assert set(cond) >= {"holds", "degree_bound", "min_degree", "max_degree"}


@pytest.mark.parametrize("claim,kw", [("boost", {"ns": (20, 40), "n_seeds": 2}),
                                      ("subset", {"n_max": 5}),
                                      ("poset", {"n_max": 5, "graphs_per_n": 5}),
                                      ("hypergraph", {"n_max": 3, "m_max": 2}),
                                      ("pooling", {"samples": 60}),
                                      ("klwl", {"samples": 60})])
def test_small_audits_pass(claim, kw):
    res = audit.run_audit(claim, seed=3, **kw)
    assert res.passed, res.counterexamples[:2]
    assert json.loads(res.to_json())["verdict"] == "PASS"


def test_unknown_claim():
    with pytest.raises(ValueError, match="theorem1"):
        audit.run_audit("lemma99")
