import json

import pytest

from cyclering.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_aut(capsys):
    code, out, _ = run(capsys, "aut", "D4")
    assert code == 0
    data = json.loads(out)
    assert data["order_O"] == 1152 and data["generator_count"] >= 1


def test_isom(capsys):
    _, out, _ = run(capsys, "isom", "I2", '{"rank": 2, "gram": [[1, 1], [1, 2]]}')
    assert json.loads(out)["isometric"]
    _, out, _ = run(capsys, "isom", "I4", "D4")
    assert json.loads(out)["witness"] == "distinct"


def test_rep(capsys):
    _, out, _ = run(capsys, "rep", "E8", "--T", "1")
    assert json.loads(out)["rep"] == "240"
    _, out, _ = run(capsys, "rep", "I3", "--T", '[["1/2"]]', "--weight",
                    '{"n": 1, "modulus": 2, "entries": [{"residue": [[1, 0, 0]], "value": "1"}]}')
    assert json.loads(out)["rep"] == "2"


def test_genus_roundtrip(capsys, tmp_path):
    path = tmp_path / "g.json"
    code, out, _ = run(capsys, "genus", "I4", "--prime", "3", "--out", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text())
    assert len(data["classes"]) == 1
    _, out, _ = run(capsys, "cycle", str(path), "--T", "1")
    got = json.loads(out)
    assert got["flat"]["rep"] == ["24"] and got["A"] == "24" and got["cutoff"] == 2


def test_pair_and_matrix(capsys):
    _, out, _ = run(capsys, "pair", "I4", "--T1", "1", "--T2", "1")
    assert json.loads(out)["inner_product"] == "1152"
    _, out, _ = run(capsys, "gram-matrix", "I4", "--left", "1", "2")
    mat = json.loads(out)["matrix"]
    assert len(mat) == 2
    _, out, _ = run(capsys, "sc-rank", json.dumps({"matrix": mat}))
    assert json.loads(out)["rank"] == 1


def test_theta(capsys):
    _, out, _ = run(capsys, "theta", "I3", "--n", "1", "--bound", "2")
    reps = [e["rep"][0] for e in json.loads(out)["entries"]]
    assert reps == ["1", "6", "12"]


def test_ring(capsys):
    a = json.dumps([{"grade": 1, "basis": [[1, 0]], "coeff": "2"}])
    b = json.dumps([{"grade": 1, "basis": [[0, 1]], "coeff": "1/3"}])
    _, out, _ = run(capsys, "ring", "mul", a, b, "--cutoff", "2")
    (term,) = json.loads(out)["product"]
    assert term["grade"] == 2 and term["coeff"] == "2/3"
    _, out, _ = run(capsys, "ring", "pair", a, b, "--cutoff", "2")
    assert json.loads(out)["pair"] == "2/3"
    _, out, _ = run(capsys, "ring", "reduce", a, "--cutoff", "2")
    assert json.loads(out)["truncated"] == ["0", "2", "0"]
    _, out, _ = run(capsys, "ring", "deg", a, "--cutoff", "1")
    assert json.loads(out)["degree"] == "2"


def test_errors(capsys):
    code, _, err = run(capsys, "verify", "unknown")
    assert code == 1 and "unknown suite" in err
    code, _, err = run(capsys, "genus", "I1")
    assert code == 1 and "BadPrime" not in err and err
    code, _, _ = run(capsys, "ring", "mul", "[]", "--cutoff", "2")
    assert code == 1


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "product-formula")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_failure_exit_code(capsys, monkeypatch):
    from cyclering import qseries

    def failing(rep, options):
        rep.check("always fails", False)

    monkeypatch.setitem(qseries.SUITES, "broken", failing)
    code, out, _ = run(capsys, "verify", "broken")
    assert code == 2 and not json.loads(out)["passed"]


def test_help_exits(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
