"""The twelve acceptance criteria, each at its stated scale and tolerance."""

import random
import time

import pytest

from conftest import record
from labelkit import audit, gallery, heuristics, labeling, predictor
from labelkit.graph import cycle_graph, random_graph, watts_strogatz_graph

TRICK_SEEDS = range(5)


def test_criterion_01_set_isomorphism_audit():
    start = time.perf_counter()
    res = audit.audit_theorem_1(5, (1, 2, 3), exhaustive_max=5, seed=0)
    elapsed = time.perf_counter() - start
    ok = res.passed and res.agreements == res.instances and elapsed < 600
    record(1, ok, f"{res.agreements}/{res.instances} agree, "
                  f"{len(res.counterexamples)} counterexamples, {elapsed:.0f} s")
    assert ok


def test_criterion_02_gae_failure():
    res = audit.run_audit("gae")
    c6 = gallery.get_instance("c6-link-gae")
    c6.verify()
    ok = res.passed and bool(res.details["witnesses"]) and res.details["c6_included"] \
        and audit.check_gae_witness(*audit.c6_link_pair())["ok"]
    record(2, ok, f"{len(res.details['witnesses'])} verified witnesses, C6 pair replayed")
    assert ok


def test_criterion_03_drnl_closed_form():
    pairs = sorted({(min(a, b), max(a, b)) for a in range(1, 20) for b in range(1, 20)
                    if a + b <= 20}, key=lambda p: (p[0] + p[1], p[0]))
    rank = {p: k + 2 for k, p in enumerate(pairs)}
    bad = [(a, b) for a in range(1, 20) for b in range(1, 20) if a + b <= 20
           and labeling.drnl_label(a, b) != rank[(min(a, b), max(a, b))]]
    stated = (labeling.drnl_label(1, 1), labeling.drnl_label(1, 2), labeling.drnl_label(2, 2))
    ok = not bad and stated == (2, 3, 5)
    record(3, ok, f"{len(rank)} distance pairs, {len(bad)} mismatches, stated values {stated}")
    assert ok


def test_criterion_04_heuristics_from_labeled_wl():
    rng = random.Random(0)
    pair_pairs = violations = labeled_equal = 0
    for t in range(24):
        n = rng.randint(10, 40)
        # ring lattices and lightly rewired rings give many labeled-equal pairs
        g = [lambda: watts_strogatz_graph(n, 4, 0.0, rng), lambda: watts_strogatz_graph(n, 4, 0.1, rng),
             lambda: random_graph(n, 0.15, rng)][t % 3]()
        pairs = list({tuple(sorted(rng.sample(g.nodes, 2))) for _ in range(40)})
        rep = heuristics.heuristic_refinement_check(g, pairs, h=3)
        pair_pairs += rep.pair_pairs
        labeled_equal += rep.labeled_equal
        violations += len(rep.violations)
    witness = heuristics.heuristic_refinement_check(cycle_graph(6), [(1, 3), (1, 4)], h=3)
    found = any(w["cn"] in ([1, 0], [0, 1]) for w in witness.failure_witnesses)
    ok = pair_pairs >= 10_000 and violations == 0 and found
    record(4, ok, f"{pair_pairs} pair-pairs ({labeled_equal} labeled-equal), {violations} "
                  f"violations, CN 1 vs 0 witness: {found}")
    assert ok


def test_criterion_05_boost_trend():
    res = audit.run_audit("boost")
    trend = res.details["trend"]
    ok = res.passed and trend["all_positive"] and trend["non_decreasing"]
    record(5, ok, "counts per seed " + ", ".join(f"{s}: {c}" for s, c in trend["counts"].items()))
    assert ok


def test_criterion_06_subset_pooling_oracle():
    res = audit.audit_subset_theorems(6, sizes=(2, 3))
    ok = res.passed and res.agreements == res.instances
    record(6, ok, f"{res.agreements}/{res.instances} enumerated instances agree")
    assert ok


def test_criterion_07_gallery_separations():
    items = {i.name: i for i in gallery.load_gallery(verify=True)}
    a = items["c6-vs-2k3-whole-graph"].evaluate()
    b = items["set-beats-subset"].evaluate()
    ok = (a["subset1"] and not a["set_zo"]) and (b["set_zo"] and not b["subset1"])
    record(7, ok, f"C6 vs 2K3 {a}; searched instance {b}")
    assert ok


def test_criterion_08_hypergraph_incidence():
    res = audit.audit_hypergraph(4, 3)
    ok = res.passed and res.agreements == res.instances
    record(8, ok, f"{res.agreements}/{res.instances} hypergraph instances agree")
    assert ok


def test_criterion_09_poset_audit():
    res = audit.run_audit("poset")
    count = res.details["witness_count"]
    ok = res.passed and count >= 10
    record(9, ok, f"{count} reversed-link witnesses, {len(res.counterexamples)} unsound separations")
    assert ok


def test_criterion_10_pooling_and_klwl():
    pool = audit.audit_pooling(500)
    klwl = audit.audit_klwl_poset(500)
    ok = pool.passed and klwl.passed and pool.instances == klwl.instances == 500
    record(10, ok, f"pooling {pool.agreements}/{pool.instances}, "
                   f"2,1-WL vs poset labels {klwl.agreements}/{klwl.instances}")
    assert ok


@pytest.mark.parametrize("trick", list(labeling.TRICKS))
def test_criterion_11_trick_validity(trick):
    counts = [labeling.validate_labeling_trick(trick, trials=500, n_max=7, seed=s).violations
              for s in TRICK_SEEDS]
    ok = sum(counts) == 0
    record(11, ok, f"{trick} {sum(counts)} violations")
    assert ok


def test_criterion_12_benchmark_ordering():
    err = predictor.gradient_check()
    start = time.perf_counter()
    rep = predictor.benchmark()
    elapsed = time.perf_counter() - start
    no, zo, drnl = rep.mean("no"), rep.mean("zo"), rep.mean("drnl")
    ok = zo > no and drnl >= zo and zo - no > 0.03 and err < 1e-4 and elapsed < 900
    means = ", ".join(f"{predictor.VARIANT_TITLES[r['labeling']]} {r['mean']:.3f}" for r in rep.rows)
    record(12, ok, f"{means}; ZO-NO {zo - no:.3f}; gradient error {err:.1e}; {elapsed:.0f} s")
    assert ok
