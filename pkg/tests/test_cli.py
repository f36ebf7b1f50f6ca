import json
import subprocess
import sys

from hvdc.cli import main


def hvdc(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hvdc", "list", "walking_arrow"],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0
    assert "cells: cart_I, id_cell_of_noniso, id_pick0" in r.stdout


def test_yoneda_check_golden(capsys):
    code, out, _ = hvdc(capsys, "run", "yoneda-check", "walking_arrow")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "$ hvdc run yoneda-check walking_arrow"
    assert lines[2:] == [f"[holds_exact] yoneda {n}" for n in
                         ("y0", "y1", "p0", "p1", "p2", "p3")] + ["6/6 checks hold"]
    sizes = json.loads(lines[1].split(": ", 1)[1])
    assert sizes["y1@0"] == [1, 1, 1] and sizes["y0@1"] == [0, 0, 0]
    assert all(a == b == c for a, b, c in sizes.values())


def test_day_golden(capsys):
    code, out, _ = hvdc(capsys, "run", "day", "z2", "y0", "y1")
    assert code == 0
    assert out.splitlines() == [
        "$ hvdc run day z2 y0 y1",
        "iso: y0⊛y1 ≅ y1",
        'iso table: [["1", "⟨id1,⟨0,id0⟩,⟨1,id1⟩⟩", "id1"]]',
        'product: {"0": [], "1": ["⟨id1,⟨0,id0⟩,⟨1,id1⟩⟩"]}',
        "[holds_exact] presheaf axioms",
        "[holds_exact] ȳ: y0⊛y1 ≅ y1",
        "2/2 checks hold",
    ]


def test_cartesian_failure_golden(capsys):
    code, out, _ = hvdc(capsys, "run", "check-cartesian", "id_cell_of_noniso", "--ctx", "default")
    assert code == 1
    lines = out.splitlines()
    assert lines[1] == "[fails] cartesian: χ has 0 factorisations through the cell"
    w = json.loads(lines[2].split("witness: ", 1)[1])
    assert w["components"] == [["0", "id*"], ["1", "id*"]]
    assert lines[-1] == "0/1 checks hold"


def test_input_errors_exit_2(capsys, tmp_path):
    assert hvdc(capsys, "run", "nope")[0] == 2
    assert hvdc(capsys)[0] == 2
    assert hvdc(capsys, "run", "doctrinal", "nope")[0] == 2
    code, _, err = hvdc(capsys, "run", "compose", "I", "I_1", "--load", "walking_arrow")
    assert code == 2 and "shape mismatch" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    code, _, err = hvdc(capsys, "run", "validate", "--load", str(bad))
    assert code == 2 and "parse error" in err


def test_validate_and_curry(capsys):
    code, out, _ = hvdc(capsys, "run", "validate", "walking_arrow")
    assert code == 0 and out.splitlines()[-1] == "22/22 checks hold"
    code, out, _ = hvdc(capsys, "run", "curry", "I", "--load", "walking_arrow")
    assert code == 0 and 'cur J: {"0": [["id0"], []], "1": [["a"], ["id1"]]}' in out


def test_kan_command(capsys):
    code, out, _ = hvdc(capsys, "run", "kan", "pick0", "pick0_*", "--load", "walking_arrow")
    assert code == 0
    assert 'extension: {"mor": {"a": "id0", "id0": "id0", "id1": "id0"}, "obj": {"0": "0", "1": "0"}}' in out


def test_json_format(capsys):
    code, out, _ = hvdc(capsys, "run", "bc-check", "J1", "--load", "z2", "--format", "json")
    rep = json.loads(out)
    assert code == 1 and rep["exit"] == 1 and rep["command"] == "bc-check"
    (c,) = rep["checks"]
    assert c["verdict"] == "fails" and c["detail"].startswith("arity 2: comparison at (0,⟨1,1⟩)")


def test_monoidal_yoneda_on_non_bc(capsys):
    code, out, _ = hvdc(capsys, "run", "monoidal-yoneda", "J1", "--load", "z2")
    assert code == 0
    assert "beck-chevalley: fails" in out
    assert "[holds_exact] BC verdict = compositors invertible" in out


def test_doctrinal_command(capsys):
    code, out, _ = hvdc(capsys, "run", "doctrinal", "double_half")
    assert code == 0 and "invertible: false" in out


def test_lift_kan_declines(capsys):
    code, out, _ = hvdc(capsys, "run", "lift-kan", "pick1@chain2∨", "at1")
    assert code == 1
    assert "declined, hypothesis preservation (p) fails" in out


def test_verify_witness(capsys, tmp_path):
    code, out, _ = hvdc(capsys, "run", "check-cartesian", "id_cell_of_noniso", "--format", "json")
    path = tmp_path / "rep.json"
    path.write_text(out, encoding="utf-8")
    code, out, _ = hvdc(capsys, "--verify-witness", str(path))
    assert code == 0 and out.strip() == "[re-fails] cartesian"
    rep = json.loads(path.read_text(encoding="utf-8"))
    rep["checks"][0]["witness"]["components"] = []
    path.write_text(json.dumps(rep), encoding="utf-8")
    code, out, _ = hvdc(capsys, "--verify-witness", str(path))
    assert code == 1 and out.strip() == "[NOT reproduced] cartesian"


def test_arity_bound_is_checked(capsys):
    assert hvdc(capsys, "--arity", "9", "run", "bc-check", "J1", "--load", "z2")[0] == 2
