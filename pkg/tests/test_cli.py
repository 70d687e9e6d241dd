import json

import pytest

from twistlink.cli import main
from twistlink.maps.graph import wheel

from conftest import FIG8, GRANNY, K5_2, P1313


@pytest.fixture
def pd(tmp_path):
    def write(text, name="k.pd"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_fig8(capsys, pd):
    code, out, _ = run(capsys, "analyze", pd(FIG8))
    rep = json.loads(out)
    assert code == 0
    assert rep["twist_number"] == 2 and rep["prime"]["ok"]


def test_analyze_failures_exit_1(capsys, pd):
    code, out, _ = run(capsys, "analyze", pd(GRANNY))
    assert code == 1 and json.loads(out)["prime"]["witness"]["kind"] == "prime-violation"
    code, out, _ = run(capsys, "analyze", pd(P1313))
    assert code == 1 and not json.loads(out)["twist_reduced"]["ok"]


def test_usage_errors_exit_2(capsys, pd, tmp_path):
    assert run(capsys, "analyze", pd("", "empty.pd"))[0] == 2
    assert run(capsys, "analyze", str(tmp_path / "missing.pd"))[0] == 2
    assert run(capsys, "augment", pd(FIG8), "--ntw", "0")[0] == 2
    assert run(capsys, "lemmas", "verify", "--lemma", "bigon-bound", "--max-edges", "4")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_parse_error_reports_line(capsys, pd):
    code, out, _ = run(capsys, "parse", pd("X[1,5,2,4]\nX[3,1,4,6]\nX[5,3,6] X[2,2,2,2]"))
    assert code == 1
    assert json.loads(out)["error"].startswith("line 3")


def test_augment_report(capsys, pd):
    code, out, _ = run(capsys, "augment", pd(K5_2), "--ntw", "3", "--i", "2")
    rep = json.loads(out)
    assert code == 0 and rep["stage"] == "L_2"
    (c,) = rep["augmented"]["circles"]
    assert (c["c"], c["r"], c["n_j"]) == (3, 1, 1)
    assert rep["r_tw"] == 2
    code, out, _ = run(capsys, "augment", pd(FIG8), "--ntw", "91", "--i", "2")
    assert json.loads(out)["degenerate"]


def test_corpus_and_ledger(capsys, tmp_path):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text("\n".join(json.dumps({"name": n, "pd": t})
                                for n, t in [("fig8", FIG8), ("granny", GRANNY)]) + "\n")
    ledger = tmp_path / "ledger.ndjson"
    code, out, _ = run(capsys, "analyze", str(corpus), "--ledger", str(ledger))
    rep = json.loads(out)
    assert code == 1 and rep["summary"] == {"total": 2, "failed": ["granny"]}
    rec = json.loads(ledger.read_text())
    assert rec["command"] == "analyze" and rec["counts"] == {"diagrams": 2}


def test_surfaces(capsys, pd):
    code, out, _ = run(capsys, "surfaces", pd(FIG8))
    rep = json.loads(out)
    assert code == 0 and rep["chi_sum"] == rep["faces_minus_2v"]


def test_output_is_deterministic(capsys, pd, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    path = pd(K5_2)
    assert run(capsys, "augment", path, "--ntw", "2", "--json", str(a))[0] == 0
    assert run(capsys, "augment", path, "--ntw", "2", "--json", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_export_dot(capsys, pd, tmp_path):
    code, out, _ = run(capsys, "export-dot", pd(FIG8))
    assert code == 0 and out.startswith("graph faces")
    g = tmp_path / "w.json"
    g.write_text(json.dumps(wheel(5).to_json()))
    code, out, _ = run(capsys, "export-dot", str(g))
    assert code == 0 and out.count(" -- ") == 10


def test_lemmas_commands(capsys, tmp_path):
    ledger = tmp_path / "l.ndjson"
    code, out, _ = run(capsys, "lemmas", "enumerate", "--context", "sphere", "--max-edges", "3",
                       "--count-only", "--ledger", str(ledger))
    assert code == 0 and json.loads(out)["counts"] == {"0": 1, "1": 2, "2": 4, "3": 14}
    code, out, _ = run(capsys, "lemmas", "verify", "--lemma", "torus", "--max-edges", "5")
    assert code == 0 and json.loads(out)["n_counterexamples"] == 0
    code, out, _ = run(capsys, "lemmas", "verify", "--lemma", "bigon-bound", "--max-edges", "6",
                       "--rtw", "6")
    assert code == 1 and json.loads(out)["n_counterexamples"] > 0
    assert len(ledger.read_text().splitlines()) == 1


def test_cap_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("TWISTLINK_MAX_EDGES", "4")
    assert run(capsys, "lemmas", "verify", "--lemma", "sphere", "--max-edges", "6")[0] == 2
