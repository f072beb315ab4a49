import json
import subprocess
import sys

from coderiv import catalog
from coderiv.cli import main, table_report
from coderiv.coderivations import Coderivation, coderivation_from_json, parse_coderivation
from coderiv.cohomology import cohomology_dims
from coderiv.extensions import ExtensionDatum


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_true(capsys):
    code, out, _ = run(capsys, "check", "psi(2,2;3)")
    assert code == 0
    assert "codifferential: true" in out


def test_check_false_reports_certificate(capsys):
    code, out, _ = run(capsys, "check", "psi(1,1;3) + psi(1,3;1)")
    assert code == 1
    assert "certificate" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "check", "psi(2,2;3) + ?")
    assert code == 2
    assert "position 13" in err


def test_unknown_catalog_entry(capsys):
    code, _, err = run(capsys, "cohomology", "d99")
    assert code == 2


def test_bad_arguments(capsys):
    assert run(capsys, "cohomology")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_json_output_round_trips(capsys):
    code, out, _ = run(capsys, "bracket", "psi(2,2;3)", "phi(3;3)", "--format", "json")
    assert code == 0
    got = coderivation_from_json(json.loads(out)["bracket"])
    from coderiv import bracket

    assert got == bracket(parse_coderivation("psi(2,2;3)"), parse_coderivation("phi(3;3)"))


def test_cohomology_json(capsys):
    code, out, _ = run(capsys, "cohomology", "d_11", "--max-degree", "2", "--format", "json", "--basis")
    assert code == 0
    js = json.loads(out)
    assert [tuple(h.values()) for h in js["h"]] == [tuple(h) for h in cohomology_dims(catalog.formula("d11"), 2).h]
    assert len(js["basis"]) == 3


def test_cohomology_text(capsys):
    code, out, _ = run(capsys, "cohomology", "d13(1:-1)", "--max-degree", "1")
    assert code == 0
    assert "H^1 =" in out


def test_table_report_marks():
    rep = table_report()
    assert len([r for r in rep["rows"] if not r["generic"]]) == 21
    assert rep["cells"] == 105
    assert rep["undocumented_mismatches"] == 0
    d11 = next(r for r in rep["rows"] if r["row"] == "d11")
    assert d11["cells"][2]["mark"] == "MATCH" and d11["cells"][2]["computed"] == [2, 1]


def test_table_is_deterministic(capsys):
    first = run(capsys, "table")
    second = run(capsys, "table")
    assert first == second
    assert first[0] == 0
    assert "100/105 cells match" in first[1]


def test_transform(capsys):
    code, out, _ = run(capsys, "transform", "perm(2,1,3)", "psi(1,1;3)")
    assert code == 0 and out.strip() == "psi(2,2;3)"
    code, out, _ = run(capsys, "transform", "opposite", "d2")
    assert parse_coderivation(out.strip()) == catalog.formula("d3")
    code, _, _ = run(capsys, "transform", "diag(1,0,1)", "d1")
    assert code == 1


def test_deform_d14(capsys):
    code, out, _ = run(capsys, "deform", "d_14", "--order", "2", "--no-jumps")
    assert code == 0
    assert "relations: none; infinitesimal deformation is versal" in out


def test_deform_d13_zero_point(capsys):
    code, out, _ = run(capsys, "deform", "d13(0:0)", "--order", "3")
    assert code == 0
    assert "t1=0, t2=0" in out and "t3=0, t4=0" in out
    assert "d1" in out


def test_deform_json_state(capsys):
    from coderiv.deformations import DeformationState

    code, out, _ = run(capsys, "deform", "d12", "--format", "json")
    s = DeformationState.from_json(json.loads(out))
    assert s.base == catalog.formula("d12")


def test_deform_custom_basis(capsys):
    code, out, _ = run(capsys, "deform", "d12", "--basis", "psi(2,3;2) - psi(3,2;2) - psi(3,3;3)", "--no-jumps")
    assert code == 0


def test_jump(capsys):
    assert run(capsys, "jump", "d12", "d1", "t1=1")[0] == 0
    assert run(capsys, "jump", "d12", "d2", "t1=1")[0] == 1


def test_extension_check(capsys, tmp_path):
    e = ExtensionDatum.build((1, 3), (2,), delta=Coderivation.zero(),
                             lam=parse_coderivation("psi(2,3;1) - psi(3,2;1)"), psi=parse_coderivation("psi(2,2;3)"))
    path = tmp_path / "datum.json"
    path.write_text(json.dumps(e.to_json()))
    code, out, _ = run(capsys, "extension-check", str(path))
    assert code == 0
    assert "codifferential: true" in out
    assert run(capsys, "extension-check", "not json")[0] == 2


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate-simple01")
    assert code == 0
    assert "bijection with d2..d11: yes" in out


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and len(out.strip().splitlines()) == 21
    code, out, _ = run(capsys, "catalog", "get", "d13", "1", "-1", "--format", "json")
    assert json.loads(out)["label"] == "d13(1:-1)"
    assert run(capsys, "catalog", "get")[0] == 2


def test_file_input(capsys, tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("psi(2,2;3) + psi(2,3;2) - psi(3,2;2) - psi(3,3;3)\n")
    code, out, _ = run(capsys, "check", str(path))
    assert code == 0


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "coderiv.cli", "check", "psi(2,2;3)"], capture_output=True, text=True)
    assert r.returncode == 0 and "true" in r.stdout
