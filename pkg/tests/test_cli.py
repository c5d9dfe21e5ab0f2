import json

import pytest

from maxkcolor.cli import main
from maxkcolor.pipeline import VerifyConfig, run_verify


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


TRIANGLE = "wgraph 3 3\ne 0 1 1\ne 1 2 1\ne 0 2 1\n"


def test_csp_gen_is_deterministic(capsys):
    a = run(capsys, "csp", "gen", "--seed", "7", "--m", "6")
    b = run(capsys, "csp", "gen", "--seed", "7", "--m", "6")
    assert a[0] == 0 and a[1] == b[1]


def test_csp_solve_planted(capsys, tmp_path):
    run(capsys, "csp", "gen", "--seed", "3", "--m", "6", "--planted", "--out", str(tmp_path))
    code, out, _ = run(capsys, "csp", "solve", str(tmp_path / "csp.json"))
    rep = json.loads(out)
    assert code == 0 and rep["satisfied"] == rep["m"] == 6
    assert (tmp_path / "assignment.json").exists()


def test_bad_json_is_input_error(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "csp", "solve", str(p))
    assert code == 1 and "JSON" in err
    assert run(capsys, "csp", "solve", str(tmp_path / "missing.json"))[0] == 1


def test_budget_refusal(capsys, tmp_path):
    run(capsys, "csp", "gen", "--seed", "3", "--m", "6", "--out", str(tmp_path))
    code, _, err = run(capsys, "csp", "solve", str(tmp_path / "csp.json"), "--budget", "4")
    assert code == 2 and "budget" in err


def test_reduce_3color_weight(capsys, tmp_path):
    run(capsys, "csp", "gen", "--seed", "1", "--m", "6", "--out", str(tmp_path))
    code, out, _ = run(capsys, "reduce", "3color", str(tmp_path / "csp.json"), "--out", str(tmp_path / "r"))
    rep = json.loads(out)
    assert code == 0 and rep["total_weight"] == 99 and rep["identity_holds"]
    assert (tmp_path / "r" / "graph.txt").exists() and (tmp_path / "r" / "layout.json").exists()
    assert (tmp_path / "r" / "report.tsv").exists()


def test_reduce_kcolor(capsys, tmp_path):
    g = tmp_path / "tri.txt"
    g.write_text(TRIANGLE)
    code, _, err = run(capsys, "reduce", "kcolor", str(g), "--k", "7")
    assert code == 1 and "pad" in err
    code, out, _ = run(capsys, "reduce", "kcolor", str(g), "--k", "6")
    rep = json.loads(out)
    assert code == 0 and rep["n"] == 18 and rep["total_weight"] == 96


def test_reduce_pad_and_unweight(capsys, tmp_path):
    g = tmp_path / "tri.txt"
    g.write_text(TRIANGLE)
    code, out, _ = run(capsys, "reduce", "pad", str(g), "--k", "5")
    assert code == 0 and json.loads(out)["total_weight"] == "232/33"
    w = tmp_path / "w.txt"
    w.write_text("wgraph 3 2\ne 0 1 3/2\ne 1 2 1/3\n")
    code, out, _ = run(capsys, "reduce", "unweight", str(w), "--seed", "4")
    rep = json.loads(out)
    assert code == 0 and rep["edges"] == 11
    assert rep["sample_fraction_weighted"] == rep["sample_fraction_unweighted"]


def test_tsv_format(capsys, tmp_path):
    g = tmp_path / "tri.txt"
    g.write_text(TRIANGLE)
    code, out, _ = run(capsys, "reduce", "kcolor", str(g), "--k", "6", "--format", "tsv")
    assert code == 0 and out.splitlines()[0] == "key\tvalue" and "total_weight\t96" in out


def test_verify_default(capsys):
    code, out, _ = run(capsys, "verify", "--k", "6")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["schema"].startswith("maxkcolor.pipeline/")
    tensor = next(s for s in rep["stages"] if s["stage"] == "tensor")
    weight = next(c for c in tensor["checks"] if c["name"] == "lifted total weight")
    assert weight["lhs"] == weight["rhs"] == 96
    for stage in rep["stages"]:
        for c in stage["checks"]:
            assert {"lhs", "rhs", "relation", "passed"} <= set(c)


def test_verify_is_deterministic():
    def strip(doc):
        doc.pop("seconds")
        for s in doc["stages"]:
            s.pop("seconds")
        return doc

    a = run_verify(VerifyConfig(seed=5)).to_json()
    b = run_verify(VerifyConfig(seed=5)).to_json()
    assert strip(a) == strip(b)


def test_verify_lemma_failure_exit_code(capsys, monkeypatch):
    import maxkcolor.pipeline as pl

    monkeypatch.setattr(pl, "tensor_weight_formula", lambda g, k: -1)
    code, _, err = run(capsys, "verify")
    assert code == 3 and "lifted total weight" in err


def test_spectral_report(capsys):
    code, out, _ = run(capsys, "spectral", "report", "--q", "6-8", "--format", "tsv")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("q\tspectral_radius") and len(lines) == 4


def test_pcp_gen_and_simulate(capsys, tmp_path):
    code, _, _ = run(capsys, "pcp", "gen", "--R", "1", "--k", "4", "--out", str(tmp_path))
    assert code == 0
    code, out, _ = run(capsys, "pcp", "simulate", str(tmp_path / "instance.json"),
                       "--proof", str(tmp_path / "proof.json"), "--k", "4", "--R", "1")
    rep = json.loads(out)
    assert code == 0 and rep["acceptance"] == 1 and rep["influence_decode"]["value"] == 1
    code, _, _ = run(capsys, "pcp", "simulate", str(tmp_path / "instance.json"),
                     "--proof", str(tmp_path / "proof.json"), "--k", "4", "--R", "2")
    assert code == 1


def test_unknown_command_exits_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code != 0
