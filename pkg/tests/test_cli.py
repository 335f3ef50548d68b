import io
import json

import pytest

from cogdim.cli import RunConfig, main
from cogdim.errors import ValidationError
from cogdim.scog_core import validate_scog


def run(capsys, monkeypatch, argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def gen(capsys, monkeypatch, *argv):
    code, out, _ = run(capsys, monkeypatch, ["gen", *argv])
    assert code == 0
    return out


def test_moore_pipe_develop(capsys, monkeypatch):
    doc = gen(capsys, monkeypatch, "moore", "--k", "3")
    code, out, _ = run(capsys, monkeypatch, ["develop", "--panel", "standard"], doc)
    assert code == 0
    rep = json.loads(out)
    assert "H1 = Z/3" in rep["summary"]
    assert rep["format"] == 1 and rep["command"] == "develop"


def test_graph_product_tree(capsys, monkeypatch):
    doc = gen(capsys, monkeypatch, "graph-product", "--L", "path4")
    code, out, _ = run(capsys, monkeypatch, ["tree"], doc)
    assert code == 0 and json.loads(out)["cd_le_1"] is True
    doc = gen(capsys, monkeypatch, "graph-product", "--L", "cycle4")
    _, out, _ = run(capsys, monkeypatch, ["tree"], doc)
    assert json.loads(out)["cd_le_1"] is False


def test_db_one_element(capsys, monkeypatch, tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"format": 1, "elements": ["x"], "relations": []}))
    code, out, _ = run(capsys, monkeypatch, ["db", str(f)])
    assert code == 0
    assert json.loads(out)["d_B"]["value"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["moore", "--k", "4"],
        ["projective", "--n", "3"],
        ["product", "--factors", "moore:2", "sphere0"],
        ["join", "--factors", "moore:2", "sphere0"],
        ["graph-product", "--L", "cycle5", "--orders", "3"],
        ["coxeter-semidirect", "--action", "moore:2", "--model", "literal"],
    ],
)
def test_gen_round_trip(capsys, monkeypatch, argv):
    out = gen(capsys, monkeypatch, *argv)
    doc = json.loads(out)
    assert doc["metadata"]["generator"] == argv[0]
    validate_scog(doc)
    code, rep, _ = run(capsys, monkeypatch, ["validate"], out)
    assert code == 0 and json.loads(rep)["valid"]


@pytest.mark.parametrize("command", ["validate", "thin", "cd", "report", "tree", "develop", "bestvina", "db"])
def test_reports_parse_and_are_deterministic(capsys, monkeypatch, command):
    doc = gen(capsys, monkeypatch, "moore", "--k", "2")
    outs = [run(capsys, monkeypatch, [command], doc) for _ in range(2)]
    assert outs[0][0] == 0
    assert outs[0][1] == outs[1][1]
    json.loads(outs[0][1])


def test_bredon_crosscheck(capsys, monkeypatch):
    doc = gen(capsys, monkeypatch, "moore", "--k", "3")
    code, out, _ = run(capsys, monkeypatch, ["bredon", "--J", '["f", 0]', "--oracle-crosscheck"], doc)
    rep = json.loads(out)
    assert code == 0 and rep["oracle_agrees"]


def test_vcd_racg_and_coxeter_cd(capsys, monkeypatch, tmp_path):
    doc = gen(capsys, monkeypatch, "coxeter-semidirect", "--action", "moore:2")
    _, out, _ = run(capsys, monkeypatch, ["cd"], doc)
    assert json.loads(out)["cd"]["value"] == 3
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"format": 1, "vertices": [0, 1, 2, 3], "simplices": [[0, 1], [1, 2], [2, 3], [3, 0]]}))
    code, out, _ = run(capsys, monkeypatch, ["vcd-racg", str(f)])
    assert code == 0 and json.loads(out)["vcd"]["value"] == 2


def test_text_format_and_off(capsys, monkeypatch):
    doc = gen(capsys, monkeypatch, "moore", "--k", "2")
    code, out, _ = run(capsys, monkeypatch, ["cd", "--format", "text"], doc)
    assert code == 0 and "cd:" in out
    code, out, _ = run(capsys, monkeypatch, ["develop", "--out", "off"], doc)
    assert code == 0 and "OFF" in out.splitlines()[0]


def test_exit_codes(capsys, monkeypatch, tmp_path):
    code, _, err = run(capsys, monkeypatch, ["validate"], "{not json")
    assert code == 2 and err
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    code, _, err = run(capsys, monkeypatch, ["cd", str(bad)])
    assert code == 2 and "bad.json" in err
    doc = gen(capsys, monkeypatch, "moore", "--k", "5")
    code, _, err = run(capsys, monkeypatch, ["develop", "--max-cells", "10"], doc)
    assert code == 3 and "size guard" in err
    monkeypatch.setenv("COGDIM_THREADS", "0")
    code, _, _ = run(capsys, monkeypatch, ["validate"], doc)
    assert code == 2


def test_run_config_guards():
    with pytest.raises(ValidationError):
        RunConfig("cd", max_cells=0)
    assert RunConfig("cd").threads == 1


def test_reflike_command(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, ["reflike", "projective:2", "moore:3"])
    rep = json.loads(out)["reflike"]
    assert code == 0 and rep["cd"] == 4 and rep["top_cohomology"] == "Z/3"
