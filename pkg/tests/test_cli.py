import json
import subprocess
import sys

import pytest

from labelkit.cli import main

C6_EDGES = "1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n"


@pytest.fixture
def c6(tmp_path):
    path = tmp_path / "c6.txt"
    path.write_text(C6_EDGES)
    return str(path)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def table(out):
    return [line for line in out.splitlines() if not line.startswith("#")]


def test_label_drnl(c6, capsys):
    code, out = run(["label", "--graph", c6, "--labeling", "drnl", "--target", "1,3"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "# labelkit 0.1.0 command=label seed=0"
    assert table(out) == ["node,label", "1,1", "2,2", "3,1", "4,4", "5,5", "6,4"]


def test_trick_alias_and_set_alias(c6, capsys):
    _, a = run(["label", "--graph", c6, "--trick", "zero_one", "--set", "1,2"], capsys)
    _, b = run(["label", "--graph", c6, "--labeling", "zero_one", "--target", "1,2"], capsys)
    assert table(a) == table(b)


def test_score_csv(c6, tmp_path, capsys):
    pairs = tmp_path / "pairs.txt"
    pairs.write_text("1 3\n1 4\n")
    code, out = run(["score", "--graph", c6, "--pairs", str(pairs)], capsys)
    assert code == 0
    assert table(out) == ["i,j,cn,aa,ra", "1,3,1,1.4426950408889634,0.5", "1,4,0,0.0,0.0"]


def test_distinguish_json(c6, capsys):
    code, out = run(["distinguish", "--graph", c6, "--target", "1,2", "--target2", "1,3",
                     "--labeling", "zero_one"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["result"]["distinguished"] is True
    assert doc["manifest"]["config"]["labeling"] == "zero_one"
    _, out = run(["distinguish", "--graph", c6, "--target", "1,2", "--target2", "1,3",
                  "--labeling", "none"], capsys)
    assert json.loads(out)["result"]["distinguished"] is False


def test_distinguish_subset_engine(tmp_path, capsys):
    c6 = tmp_path / "c6.txt"
    c6.write_text(C6_EDGES)
    k3 = tmp_path / "2k3.txt"
    k3.write_text("1 2\n2 3\n3 1\n4 5\n5 6\n6 4\n")
    code, out = run(["distinguish", "--graph", str(c6), "--graph2", str(k3), "--target",
                     "1,2,3,4,5,6", "--engine", "subset", "--k", "1"], capsys)
    assert json.loads(out)["result"]["distinguished"] is True


def test_refine_with_target(c6, capsys):
    code, out = run(["refine", "--graph", c6, "--target", "1,2", "--format", "json"], capsys)
    assert json.loads(out)["result"]["num_classes"] == 3
    _, out = run(["refine", "--graph", c6], capsys)
    assert table(out)[0] == "node,round,color"


def test_refine_kwl(c6, capsys):
    code, out = run(["refine", "--graph", c6, "--k", "2"], capsys)
    assert code == 0 and table(out)[0] == "tuple,color" and len(table(out)) == 37


def test_output_is_byte_identical(c6, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["predict", "--graph", c6, "--epochs", "5", "--seed", "3", "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = table(a.read_text())
    assert lines[0] == "i,j,score" and len(lines) == 1 + 15


def test_audit_exit_zero(capsys):
    code, out = run(["audit", "--claim", "gae", "--seed", "7", "--n-max", "5"], capsys)
    assert code == 0
    assert json.loads(out)["result"]["verdict"] == "PASS"


def test_benchmark_manifest(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("LABELKIT_THREADS", "1")
    g = tmp_path / "g.txt"
    g.write_text("".join(f"{i} {i % 30 + 1}\n{i} {(i + 1) % 30 + 1}\n" for i in range(1, 31)))
    manifest = tmp_path / "run.json"
    code, out = run(["benchmark", "--graph", str(g), "--labelings", "no", "zo", "--seeds", "2",
                     "--h", "1", "--epochs", "3", "--manifest", str(manifest)], capsys)
    assert code == 0
    assert table(out)[0] == "labeling,name,mean_auc,std_auc,seed_0,seed_1"
    doc = json.loads(manifest.read_text())
    assert doc["manifest"]["h"] == 1 and [r["labeling"] for r in doc["rows"]] == ["no", "zo"]


@pytest.mark.parametrize("argv,fragment", [
    (["label", "--graph", "G", "--labeling", "magic", "--target", "1,2"], "zero_one"),
    (["label", "--graph", "G", "--labeling", "drnl"], "--target"),
    (["label", "--graph", "missing.txt", "--labeling", "drnl", "--target", "1,2"], "no such file"),
    (["distinguish", "--graph", "G", "--target", "1,2", "--layers", "x"], "--layers"),
    (["label", "--graph", "G", "--labeling", "drnl", "--target", "1,2,3"], "2 target nodes"),
    (["label", "--graph", "G", "--labeling", "zero_one", "--target", "1,9"], "not in the graph"),
    (["audit", "--claim", "lemma"], "theorem1"),
    (["predict", "--graph", "G", "--labeling", "drnl_x"], "zo_s"),
])
def test_usage_errors_exit_two(argv, fragment, c6, capsys):
    argv = [c6 if a == "G" else a for a in argv]
    code = main(argv)
    assert code == 2
    assert fragment in capsys.readouterr().err


def test_malformed_graph_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n1 two\n")
    assert main(["score", "--graph", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_bad_thread_env(c6, capsys, monkeypatch):
    monkeypatch.setenv("LABELKIT_THREADS", "zero")
    assert main(["score", "--graph", c6]) == 2


def test_unknown_command_via_module():
    proc = subprocess.run([sys.executable, "-m", "labelkit", "frobnicate"], capture_output=True,
                          text=True)
    assert proc.returncode == 2
    assert "invalid choice" in proc.stderr
