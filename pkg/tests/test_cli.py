import json
import subprocess
import sys

import pytest

from qasa.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None), out


def test_verify_relations_small(capsys):
    code, doc, _ = run(capsys, "verify-relations", "--m", "2", "--n", "1", "--window", "0")
    assert code == 0 and doc["exit_code"] == 0
    assert doc["proved"] == doc["instances"] > 0 and not doc["inconclusive"]
    assert doc["soundness"]["refuted"] == []
    assert all("elapsed" not in r for r in doc["results"])


def test_window_zero_is_smaller(capsys):
    _, d0, _ = run(capsys, "verify-relations", "--m", "2", "--n", "1", "--window", "0")
    _, d1, _ = run(capsys, "verify-relations", "--m", "2", "--n", "1", "--window", "1")
    assert d0["instances"] < d1["instances"]


@pytest.mark.parametrize("argv", [
    ["verify-relations", "--m", "1", "--n", "1"],
    ["verify-identities", "--suite", "nope"],
    ["verify-relations", "--window", "-1"],
    ["natural-module", "--param", "q^"],
    ["natural-module", "--param", "0"],
    ["loop", "--b", "x"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as ei:
        code = main(argv)
        raise SystemExit(code)
    assert ei.value.code == 64


def test_qbracket_free_suite(capsys):
    code, doc, _ = run(capsys, "verify-identities", "--suite", "qbracket-free")
    assert code == 0 and doc["instances"] >= 800


def test_corpus_file(capsys, tmp_path):
    f = tmp_path / "ids.txt"
    f.write_text("K(1)*Xp(1,0)*Kinv(1) == q^-0*Xp(1,0)\n# comment\nC2*C2inv == 1\n")
    code, doc, _ = run(capsys, "verify-identities", "--m", "1", "--n", "2", "--corpus", str(f))
    assert doc["instances"] == 2 and code == 0
    f.write_text("Xp(1,0)*Xp(2,0) == Xp(2,0)*Xp(1,0)\n")
    code, doc, _ = run(capsys, "verify-identities", "--m", "1", "--n", "2", "--corpus", str(f))
    assert code == 2 and doc["inconclusive"]


def test_natural_module_command(capsys):
    code, doc, _ = run(capsys, "natural-module", "--m", "1", "--n", "2", "--param", "q")
    assert code == 0
    assert doc["gate"]["pass"] and doc["integrability"]["integrable"]
    assert len(doc["drinfeld_data"]) == 1
    assert doc["drinfeld_data"][0]["drinfeld"]["Q"] == ["1", "-q"]


def test_natural_module_variants(capsys):
    assert run(capsys, "natural-module", "--trivial")[0] == 0
    code, doc, _ = run(capsys, "natural-module", "--corrupt", "--window", "1")
    assert code == 1 and not doc["gate"]["pass"]


def test_loop_command(capsys):
    code, doc, _ = run(capsys, "loop", "--b", "1/2", "--window", "3", "--relation-window", "1")
    assert code == 0
    assert doc["decomposition"]["direct_sum"]
    assert {"slice": 1, "exponent": "1+1/2"} in doc["d_exponents"]


def test_loop_window_too_small(capsys):
    code, doc, out = run(capsys, "loop", "--window", "1")
    assert code == 2 and "inconclusive: window" in out


def test_budget_precedence(capsys, monkeypatch):
    monkeypatch.setenv("QASA_BUDGET", "7")
    _, doc, _ = run(capsys, "verify-relations", "--window", "0")
    assert doc["config"]["budget"] == 7
    _, doc, _ = run(capsys, "verify-relations", "--window", "0", "--budget", "9")
    assert doc["config"]["budget"] == 9
    monkeypatch.setenv("QASA_BUDGET", "seven")
    assert main(["verify-relations", "--window", "0"]) == 64


def test_json_out_and_determinism(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        code = subprocess.call([sys.executable, "-m", "qasa", "natural-module", "--m", "2", "--n", "1",
                                "--json-out", str(p)])
        assert code == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_timing_flag_adds_elapsed(capsys):
    _, doc, _ = run(capsys, "verify-relations", "--window", "0", "--timing")
    assert "elapsed" in doc and all("elapsed" in r for r in doc["results"])
