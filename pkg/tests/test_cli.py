import csv
import io
import json
import subprocess
import sys

import pytest

from chordgf import cli
from chordgf.evolution import IntegralityViolation
from chordgf.spectra import Spectrum


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return json.loads(text)["rows"]


def test_evolve_one_backbone_table(capsys):
    code, out, _ = run(capsys, "evolve", "--model", "point", "--orientable", "--max-k", "4", "--one-backbone", "8")
    assert code == 0
    data = json.loads(out)
    assert data["header"]["tool"] == "chordgf" and data["header"]["version"]
    assert data["header"]["config"]["one_backbone"] == 8
    rows = data["rows"]
    assert all(r["b_spec"] == "e8" for r in rows)
    assert any(r["g_or_h"] == 0 and r["k"] == 2 and r["l"] == 4 for r in rows)


def test_evolve_length_non_orientable(capsys):
    code, out, _ = run(capsys, "evolve", "--model", "length", "--non-orientable", "--max-k", "3")
    assert code == 0
    rows = rows_of(out)
    assert {r["variant"] for r in rows} == {"non-orientable"}
    assert max(r["k"] for r in rows) == 3


def test_evolve_initial_condition_only(capsys):
    code, out, _ = run(capsys, "evolve", "--max-k", "0", "--max-weight", "3")
    assert code == 0
    assert sorted(r["b_spec"] for r in rows_of(out)) == ["e1", "e2", "e3"]


def test_csv_has_header_line_and_columns(capsys):
    code, out, _ = run(capsys, "evolve", "--max-k", "1", "--max-weight", "2", "--format", "csv")
    assert code == 0
    first, rest = out.split("\n", 1)
    assert first.startswith("# ") and json.loads(first[2:])["command"] == "evolve"
    reader = csv.DictReader(io.StringIO(rest))
    assert reader.fieldnames == ["variant", "model", "g_or_h", "k", "l", "b_spec", "n_or_p_spec", "count"]
    assert len(list(reader)) == 3


def test_vertex_non_orientable_is_config_error(capsys):
    code, _, err = run(capsys, "evolve", "--model", "vertex", "--non-orientable")
    assert code == 2 and "orientable" in err


def test_bad_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["evolve", "--max-k", "many"])
    assert exc.value.code == 2


def test_integrality_violation_exit_code(capsys, monkeypatch):
    def broken(state):
        raise IntegralityViolation("half a diagram")
        yield

    monkeypatch.setattr(cli, "count_table", broken)
    code, _, err = run(capsys, "evolve", "--max-k", "1")
    assert code == 3 and "integrality" in err


def test_oracle_square(capsys):
    code, out, _ = run(capsys, "oracle", "--sizes", "4", "--k", "2")
    assert code == 0
    point = [r for r in rows_of(out) if r["model"] == "point"]
    assert sorted((r["g_or_h"], int(r["count"])) for r in point) == [(0, 1), (0, 1), (1, 1)]


def test_oracle_rejects_too_many_chords(capsys):
    code, _, _ = run(capsys, "oracle", "--sizes", "2", "--k", "2")
    assert code == 2


def test_check_golden_passes(capsys, tmp_path):
    report = tmp_path / "golden.json"
    code, _, err = run(capsys, "check", "golden", "-o", str(report))
    assert code == 0
    assert err.count("[PASS]") == 2
    assert json.loads(report.read_text())["passed"] is True


def test_check_shapes_reports_failure(capsys, tmp_path):
    code, _, err = run(capsys, "check", "shapes", "-o", str(tmp_path / "s.json"))
    assert code == 1 and "[FAIL]" in err


def test_check_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        cli.main(["check", "everything"])
    assert exc.value.code == 2


def test_matrix_report(capsys):
    code, out, _ = run(capsys, "matrix", "--N", "3", "--m", "2", "--samples", "20000", "--seed", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep["exact"] == "9"
    assert set(rep) >= {"mean", "stderr", "exact", "zscore", "header"}
    assert rep["header"]["config"]["seed"] == 3


def test_matrix_b_spec(capsys):
    code, out, _ = run(capsys, "matrix", "--N", "4", "--p", "2", "--s", "1", "--b-spec", "e1+e2", "--samples", "5000")
    assert code == 0 and json.loads(out)["exact"] == "40"


def test_matrix_config_errors(capsys):
    assert run(capsys, "matrix", "--N", "3", "--p", "5", "--m", "2")[0] == 2
    assert run(capsys, "matrix", "--N", "3")[0] == 2


def test_freeprob_ops(capsys):
    code, out, _ = run(capsys, "freeprob", "free-mul", "--a", "1,1,2,5,14", "--b", "1,1,1,1,1")
    assert code == 0 and json.loads(out)["coefficients"] == ["1", "1", "2", "5", "14"]
    code, out, _ = run(capsys, "freeprob", "genus0-length", "--weights", "1,1,1,1,1,1", "--order", "5")
    assert json.loads(out)["coefficients"] == ["1", "1", "2", "5", "14", "42"]
    code, out, _ = run(capsys, "freeprob", "r-transform", "--a", "1,0,1,0,2")
    assert json.loads(out)["coefficients"] == ["0", "1", "0", "0"]


def test_freeprob_errors(capsys):
    assert run(capsys, "freeprob", "s-transform", "--a", "1,0,1")[0] == 2
    assert run(capsys, "freeprob", "genus0-length", "--weights", "1")[0] == 2
    assert run(capsys, "freeprob", "free-add", "--a", "1,0,1")[0] == 2


def test_repeated_runs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        assert cli.main(["matrix", "--N", "3", "--m", "4", "--samples", "3000", "--seed", "9", "-o", str(target)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c, d = tmp_path / "c.json", tmp_path / "d.json"
    for target in (c, d):
        assert cli.main(["check", "harer-zagier", "-o", str(target)]) == 0
    assert c.read_bytes() == d.read_bytes()


def test_output_directory_variable(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CHORDGF_OUTPUT_DIR", str(tmp_path))
    assert cli.main(["oracle", "--sizes", "2", "--format", "csv"]) == 0
    assert capsys.readouterr().out == ""
    assert (tmp_path / "oracle-2-orientable.csv").exists()


def test_parse_spectrum_forms():
    assert cli.parse_spectrum("e1+2e3") == cli.parse_spectrum("1,3,3") == Spectrum({1: 1, 3: 2})
    assert cli.parse_spectrum("0") == Spectrum()


def test_console_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "chordgf.cli", "--version"], capture_output=True, text=True, check=False
    )
    assert done.returncode == 0 and "chordgf" in done.stdout
