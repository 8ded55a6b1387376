import json
import subprocess
import sys

import pytest

from liepoisson.cli import main
from liepoisson.classify import catalog
from liepoisson.extension import ExtensionTensor, crmhd, leibniz
from liepoisson.transform import apply_chain
from liepoisson.linalg import BasisChange


@pytest.fixture
def crmhd_doc(tmp_path):
    path = tmp_path / "crmhd_beta1.json"
    doc = crmhd(1).to_json()
    doc["name"] = "crmhd"
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def broken_doc(tmp_path):
    path = tmp_path / "crmhd_broken.json"
    doc = crmhd(1).to_json()
    doc["w"][3][2][1] = "1"  # breaks upper-index symmetry
    path.write_text(json.dumps(doc))
    return path


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out


def test_validate_ok(crmhd_doc, capsys):
    code, out = run(["validate", str(crmhd_doc)], capsys)
    assert code == 0
    assert "valid (order 4, semidirect yes)" in out


def test_validate_violation(broken_doc, capsys):
    code, out = run(["validate", str(broken_doc)], capsys)
    assert code == 1
    assert "symmetry" in out.lower()


def test_validate_parse_error(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    code = main(["validate", str(empty)])
    assert code == 2


def test_classify_leibniz4(tmp_path, capsys):
    doc = tmp_path / "l4.json"
    doc.write_text(json.dumps(leibniz(4).to_json()))
    code, out = run(["classify", str(doc)], capsys)
    assert code == 0
    assert "n4-case4b" in out


def test_classify_crmhd_semidirect(crmhd_doc, capsys):
    code, out = run(["classify", str(crmhd_doc)], capsys)
    assert code == 0
    assert "n3-case2" in out and "semidirect" in out


def test_classify_witness_replays(tmp_path, capsys):
    entry = catalog(4).lookup("n4-case1b")
    doc = tmp_path / "e.json"
    doc.write_text(json.dumps(entry.to_json()))
    witness = tmp_path / "w.json"
    code, out = run(["classify", str(doc), "--witness", str(witness)], capsys)
    assert code == 0
    chain = [BasisChange.from_json(d) for d in json.loads(witness.read_text())]
    assert apply_chain(entry, chain).w == entry.w


def test_classify_order_too_high(tmp_path, capsys):
    doc = tmp_path / "l5.json"
    doc.write_text(json.dumps(leibniz(5).to_json()))
    code, out = run(["classify", str(doc)], capsys)
    assert code == 3


def test_casimir_crmhd_verify(crmhd_doc, capsys):
    code, out = run(["casimir", str(crmhd_doc), "--verify"], capsys)
    assert code == 0
    assert out.count("[pass]") >= 4
    assert "table fixtures: match" in out


def test_casimir_case3c(tmp_path, capsys):
    doc = tmp_path / "c3c.json"
    doc.write_text(json.dumps(catalog(4).lookup("n4-case3c").to_json()))
    code, out = run(["casimir", str(doc), "--verify", "--jobs", "2"], capsys)
    assert code == 0
    assert "ξ1 f(ξ4) + ξ2 ξ3 f'(ξ4)" in out
    assert "table fixtures: match" in out


def test_casimir_abelian_full_function(tmp_path, capsys):
    from liepoisson.extension import abelian

    doc = tmp_path / "ab3.json"
    doc.write_text(json.dumps(abelian(3).to_json()))
    code, out = run(["casimir", str(doc)], capsys)
    assert code == 0
    assert "f(ξ1, ξ2, ξ3)" in out


def test_simulate_rigid_body_preset(tmp_path, capsys):
    out_csv = tmp_path / "traj.csv"
    summary = tmp_path / "drift.json"
    code, out = run([
        "simulate", "--preset", "rigid-body", "--inertia", "1,2,3",
        "--dt", "0.001", "--steps", "2000",
        "--out", str(out_csv), "--summary", str(summary),
    ], capsys)
    assert code == 0
    drifts = json.loads(summary.read_text())["drifts"]
    assert all(v < 1e-8 for v in drifts.values())
    assert out_csv.read_text().startswith("time,l0_x")


def test_simulate_heavy_top_preset(tmp_path, capsys):
    summary = tmp_path / "drift.json"
    code, out = run([
        "simulate", "--preset", "heavy-top", "--dt", "0.001", "--steps", "2000",
        "--summary", str(summary),
    ], capsys)
    assert code == 0
    drifts = json.loads(summary.read_text())["drifts"]
    assert all(v < 1e-8 for v in drifts.values())


def test_simulate_abelian_monitors_constant(tmp_path, capsys):
    from liepoisson.extension import abelian

    doc = tmp_path / "ab2.json"
    doc.write_text(json.dumps(abelian(2).to_json()))
    summary = tmp_path / "s.json"
    code, out = run(["simulate", str(doc), "--dt", "0.01", "--steps", "100",
                     "--summary", str(summary)], capsys)
    assert code == 0
    drifts = json.loads(summary.read_text())["drifts"]
    assert all(v == 0.0 for v in drifts.values())


def test_catalog_counts(tmp_path, capsys):
    for order, count in ((3, 4), (4, 9)):
        out_path = tmp_path / f"cat{order}.json"
        code, _ = run(["catalog", "--order", str(order), "--out", str(out_path)], capsys)
        assert code == 0
        docs = json.loads(out_path.read_text())
        assert len(docs) == count
        for doc in docs:
            ExtensionTensor.from_json(doc)


def test_catalog_out_of_range(capsys):
    code, _ = run(["catalog", "--order", "5"], capsys)
    assert code == 3


def test_leibniz_emission(tmp_path, capsys):
    out_path = tmp_path / "l5sd.json"
    code, _ = run(["leibniz", "--order", "5", "--semidirect", "--out", str(out_path)], capsys)
    assert code == 0
    doc = json.loads(out_path.read_text())
    t = ExtensionTensor.from_json(doc)
    assert t.n == 6 and t.semidirect
    assert t.slice_upper(0).is_identity()


def test_document_round_trip_determinism(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run(["crmhd", "--beta", "5/2", "--out", str(a)], capsys)
    run(["crmhd", "--beta", "5/2", "--out", str(b)], capsys)
    assert a.read_text() == b.read_text()
    doc = json.loads(a.read_text())
    t = ExtensionTensor.from_json(doc)
    assert doc["beta"] == "5/2"
    assert json.dumps(t.to_json()["w"]) == json.dumps(doc["w"])


def test_console_script_installed():
    result = subprocess.run([sys.executable, "-m", "liepoisson.cli", "catalog", "--order", "2"],
                            capture_output=True, text=True)
    assert result.returncode == 0
    assert "n2-case2" in result.stdout


def test_casimir_unnormalized_input_reduces_first(tmp_path, capsys):
    # raw form with a removable coboundary: synthesis needs the reduction
    from liepoisson.extension import from_lower_slices
    from liepoisson.linalg import ExactMatrix

    w2 = ExactMatrix.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    w3 = ExactMatrix.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    t = from_lower_slices([None, w2, w3], 3)
    doc = tmp_path / "raw.json"
    doc.write_text(json.dumps(t.to_json()))
    code, out = run(["casimir", str(doc)], capsys)
    assert code == 0
    assert "normal-form coordinates of n3-case3" in out


def test_fixture_directory_override(tmp_path, capsys, monkeypatch):
    from liepoisson.tables import solvable_table

    fixdir = tmp_path / "fixtures"
    fixdir.mkdir()
    fams = solvable_table()["n3-case4"]
    (fixdir / "n3-case4.json").write_text(json.dumps([f.to_json() for f in fams]))
    monkeypatch.setenv("LIEX_FIXTURES", str(fixdir))
    doc = tmp_path / "l3.json"
    doc.write_text(json.dumps(leibniz(3).to_json()))
    code, out = run(["casimir", str(doc), "--verify"], capsys)
    assert code == 0
    assert "table fixtures: match" in out


def test_simulate_dimension_mismatch_exit_code(tmp_path, capsys):
    doc = tmp_path / "t.json"
    doc.write_text(json.dumps(leibniz(2).to_json()))
    ham = tmp_path / "h.json"
    blocks = [[[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]]  # 1x1 blocks for a 2-field tensor
    ham.write_text(json.dumps({"blocks": blocks}))
    code, out = run(["simulate", str(doc), "--hamiltonian", str(ham),
                     "--dt", "0.01", "--steps", "5"], capsys)
    assert code == 5
