import json

import pytest
from pydantic import ValidationError

import fox
from cli import build_parser, main, run
from models import ErrorReport, InvariantReport, RunConfig, SelftestReport
from reps import DATA_DIR
from selftest import run_selftest


def _run_json(tmp_path, *args):
    out = tmp_path / "report.json"
    code = main([*args, "--json", "--out", str(out), "-q"])
    return code, out.read_text()


def test_compute_trefoil(tmp_path):
    code, text = _run_json(tmp_path, "compute", "--knot", "trefoil")
    assert code == 0
    report = InvariantReport.model_validate_json(text)
    assert report.canonical == "(1 - t + t^2)/(1 - t)"
    assert report.degree == 1
    assert report.indeterminacy.sign_allowed
    assert report.model_dump_json(indent=2) + "\n" == text


def test_compute_is_deterministic(tmp_path):
    first = _run_json(tmp_path, "compute", "--knot", "figure8", "--rep", "figure8_sl2qi")
    second = _run_json(tmp_path, "compute", "--knot", "figure8", "--rep", "figure8_sl2qi")
    assert first == second
    assert json.loads(first[1])["field"] == "Qi:trivial"


def test_text_output(capsys):
    assert main(["compute", "--knot", "trefoil", "-q"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("canonical") and line.endswith("(1 - t + t^2)/(1 - t)") for line in lines)
    assert any(line.startswith("indeterminacy.dimension") for line in lines)


def test_presentation_file(tmp_path):
    path = DATA_DIR / "presentations" / "trefoil_wirtinger.pres"
    code, text = _run_json(tmp_path, "check-parity", "--presentation", str(path))
    assert code == 0
    parity = json.loads(text)["parity"]
    assert parity["parity_holds"] and parity["bound_holds"]


def test_link_presentation_file(tmp_path):
    path = DATA_DIR / "presentations" / "hopf.pres"
    code, text = _run_json(tmp_path, "check-symmetry", "--presentation", str(path))
    assert code == 0
    symmetry = json.loads(text)["symmetry"]
    assert symmetry["holds"] and symmetry["charge_valid"]


def test_orders_command(tmp_path):
    code, text = _run_json(tmp_path, "orders", "--knot", "trefoil", "--rep", "trefoil_sl2q")
    assert code == 0
    assert json.loads(text)["orders"]["matches_invariant"] is True


def test_check_symmetry_command(tmp_path):
    code, text = _run_json(tmp_path, "check-symmetry", "--knot", "trefoil", "--rep", "trefoil_sl2q")
    assert code == 0
    symmetry = json.loads(text)["symmetry"]
    assert symmetry["holds"]
    assert symmetry["charge"] == [-1]


def test_palindrome_of_rational_invariant_fails(tmp_path):
    code, text = _run_json(tmp_path, "palindrome", "--knot", "trefoil")
    assert code == 1
    assert json.loads(text)["palindrome"]["found"] is False


def test_palindrome_command(tmp_path):
    code, text = _run_json(tmp_path, "palindrome", "--knot", "trefoil", "--rep", "trefoil_sl2q")
    assert code == 0
    assert json.loads(text)["palindrome"]["shift"] == -1


def test_enumerate_command(tmp_path):
    code, text = _run_json(tmp_path, "enumerate", "--knot", "trefoil", "--prime", "3")
    assert code == 0
    report = json.loads(text)
    assert report["count"] == len(report["representations"])
    assert report["irreducible_count"] > 0


@pytest.mark.parametrize(
    "args",
    [
        ["compute", "--knot", "trefoil", "--field", "R"],
        ["compute"],
        ["compute", "--knot", "8_19"],
        ["compute", "--knot", "trefoil", "--rep", "no_such_rep"],
        ["compute", "--presentation", "/nonexistent/path.pres"],
        ["enumerate", "--knot", "trefoil", "--prime", "11"],
        ["enumerate", "--knot", "unknot", "--prime", "3"],
        ["check-parity", "--knot", "hopf"],
    ],
)
def test_input_errors_exit_with_two(tmp_path, args):
    code, text = _run_json(tmp_path, *args)
    assert code == 2
    report = ErrorReport.model_validate_json(text)
    assert not report.success


@pytest.mark.parametrize(
    "content",
    [
        b"field: Fp:5\na: 1/5\nb: 1\n",
        b"field: Q\na: 1/0\nb: 1\n",
        b"field: Q\na: 1\nb: \xff\n",
    ],
    ids=["denominator-vanishes-mod-p", "zero-denominator", "not-utf8"],
)
def test_bad_representation_files_exit_with_two(tmp_path, content):
    path = tmp_path / "bad.rep"
    path.write_bytes(content)
    code, text = _run_json(tmp_path, "compute", "--knot", "trefoil", "--rep", str(path))
    assert code == 2
    assert not ErrorReport.model_validate_json(text).success


def test_presentation_file_that_is_not_utf8_exits_with_two(tmp_path):
    path = tmp_path / "latin1.pres"
    path.write_bytes(b"gens: a b\nrel: a b A B\nname: n\xe9ud\n")
    code, _ = _run_json(tmp_path, "compute", "--presentation", str(path))
    assert code == 2


def test_wada_needs_deficiency_one(tmp_path):
    path = tmp_path / "two_relators.pres"
    path.write_text("gens: a b\nrel: a b A B\nrel: a B\n")
    code, _ = _run_json(tmp_path, "compute", "--presentation", str(path))
    assert code == 2


def test_metrics_file(tmp_path):
    metrics = tmp_path / "metrics.prom"
    code, _ = _run_json(tmp_path, "compute", "--knot", "trefoil", "--metrics-out", str(metrics))
    assert code == 0
    assert "twisted_torsion_computations_total" in metrics.read_text()


def test_run_config_validation():
    with pytest.raises(ValidationError):
        RunConfig(command="compute", knot="trefoil", presentation="x.pres")
    with pytest.raises(ValidationError):
        RunConfig(command="compute", knot="trefoil", jobs=0)
    with pytest.raises(ValidationError):
        RunConfig(command="enumerate", knot="trefoil")
    assert RunConfig(command="selftest").jobs == 1


def test_parser_rejects_both_sources():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["compute", "--knot", "trefoil", "--presentation", "p.pres"])


def test_run_returns_report_models():
    code, report = run(RunConfig(command="compute", knot="5_1"))
    assert code == 0
    assert report.degree == 3


def test_selftest_subset_passes():
    report = run_selftest(only=[1, 5, 12])
    assert isinstance(report, SelftestReport)
    assert report.success
    assert [c.number for c in report.criteria] == [1, 5, 12]
    assert report.criteria[0].detail == "torsion = -1"


def test_corrupted_table_fails_selftest(monkeypatch):
    monkeypatch.setitem(fox.KNOT_TABLE, "trefoil", fox.KNOT_TABLE["5_1"])
    report = run_selftest(only=[5])
    assert not report.success
    assert report.criteria[0].status == "fail"


@pytest.mark.slow
def test_full_selftest():
    report = run_selftest()
    assert report.success, [c for c in report.criteria if c.status == "fail"]
