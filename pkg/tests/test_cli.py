import json
import subprocess
import sys

import pytest

from conftest import CASE, FIXTURES
from execdoc.cli import main

SQUARE_PLUS_C = """<math xmlns="http://www.w3.org/1998/Math/MathML"><apply><plus/>
  <apply><power/><ci>x</ci><cn>2</cn></apply><ci>c</ci></apply></math>"""


def test_case_study_exit_zero(case_dir, capsys):
    out = case_dir / "final.xml"
    trace = case_dir / "trace.json"
    code = main(["run", str(case_dir / "document.xml"), "--strict", "--out", str(out), "--trace", str(trace)])
    text = capsys.readouterr().out
    assert code == 0
    assert "integrity: ok" in text
    assert "asserts: 7 passed, 0 failed" in text
    assert out.exists()
    [relax] = json.loads(trace.read_text())
    assert relax["computation"] == "relax" and relax["converged"] is True
    bests = [r["best_energy"] for r in relax["records"]]
    assert bests == sorted(bests, reverse=True)
    assert (case_dir / "out" / "acetic-acid-energies.xml").exists()


def test_identical_runs_identical_output(case_dir, tmp_path):
    outs = []
    for name in ("a.xml", "b.xml"):
        assert main(["run", str(case_dir / "document.xml"), "--out", str(tmp_path / name)]) == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


def test_failing_assert_exit_two(case_dir, capsys):
    doc = case_dir / "document.xml"
    doc.write_text(doc.read_text().replace('value="8"', 'value="9"'))
    assert main(["run", str(doc)]) == 2
    assert "asserts: 6 passed, 1 failed" in capsys.readouterr().out


@pytest.mark.parametrize("name, error", [
    ("missing-parameter", "MissingParameterError"),
    ("unbound-identifier", "UnboundIdentifierError"),
    ("cycle-a", "InclusionCycleError"),
    ("symbol-cycle", "SymbolCycleError"),
])
def test_pipeline_errors_exit_one(name, error, capsys):
    assert main(["run", str(FIXTURES / "negative" / f"{name}.xml")]) == 1
    assert error in capsys.readouterr().err


def test_dimension_mismatch_strict_and_validate(capsys):
    path = str(FIXTURES / "negative" / "dimension-mismatch.xml")
    assert main(["run", "--strict", path]) == 3
    assert "[dimension]" in capsys.readouterr().out
    assert main(["validate", path]) == 3


def test_validate_stops_before_computing(case_dir, capsys):
    assert main(["validate", str(case_dir / "document.xml")]) == 0
    assert capsys.readouterr().out.strip() == "integrity: ok"
    assert not (case_dir / "out").exists()


def test_failed_run_still_writes_out(tmp_path):
    out = tmp_path / "partial.xml"
    assert main(["run", str(FIXTURES / "negative" / "unbound-identifier.xml"), "--out", str(out)]) == 1
    assert 'status="failed"' in out.read_text()


def test_missing_document(tmp_path, capsys):
    assert main(["run", str(tmp_path / "absent.xml")]) == 1
    assert "absent.xml" in capsys.readouterr().err


def test_eval_square_plus_c(tmp_path, capsys):
    (tmp_path / "f.xml").write_text(SQUARE_PLUS_C)
    (tmp_path / "b.json").write_text(json.dumps({"x": 2, "c": 4}))
    assert main(["eval", str(tmp_path / "f.xml"), str(tmp_path / "b.json")]) == 0
    assert capsys.readouterr().out.strip() == "8"


def test_eval_molecule_mass(tmp_path, capsys):
    (tmp_path / "m.xml").write_text(
        '<apply><csymbol>getMass</csymbol><ci>m</ci></apply>')
    (tmp_path / "b.json").write_text(json.dumps({"m": {"molecule": str(CASE / "molecules" / "water.xml")}}))
    assert main(["eval", str(tmp_path / "m.xml"), str(tmp_path / "b.json")]) == 0
    value, unit = capsys.readouterr().out.split()
    assert float(value) == pytest.approx(18.015, abs=1e-9) and unit == "units:dalton"


def test_eval_unbound(tmp_path, capsys):
    (tmp_path / "f.xml").write_text(SQUARE_PLUS_C)
    assert main(["eval", str(tmp_path / "f.xml")]) == 1
    assert "UnboundIdentifierError" in capsys.readouterr().err


def test_module_entry_point(case_dir):
    proc = subprocess.run([sys.executable, "-m", "execdoc", "validate", str(case_dir / "document.xml")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "integrity: ok" in proc.stdout
