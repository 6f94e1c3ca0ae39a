import csv
import json

import pytest

from psent import manage
from psent.app.config import settings


PAINLEVE_ONE = [[["0", "0"], ["1", "0"]], [], [["6", "0"]]]
CUBIC = [["0"], [], [], ["2"]]
CUBIC_WITH_Z = [["0", "1"], [], [], ["2"]]


def read(path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def out(tmp_path):
    return tmp_path / "out"


def test_analyze_passing_equation(equation_file, out):
    path = equation_file(2, PAINLEVE_ONE)
    assert manage.run(["analyze", "--equation", str(path), "--out", str(out)]) == 0
    report = read(out / "resonance.json")
    assert report["verdict"] == "PASS"
    assert report["schema_version"] == "1.0"


def test_analyze_failing_equation_still_writes_the_report(equation_file, out):
    path = equation_file(3, CUBIC_WITH_Z)
    assert manage.run(["analyze", "--equation", str(path), "--out", str(out)]) == 2
    report = read(out / "resonance.json")
    assert not report["passed"]
    assert report["witnesses"] == ["rho"]
    assert report["closed_form"]["passed"] is False


def test_analyze_non_canonical_input_in_series_mode(equation_file, out):
    path = equation_file(2, [["0", "2"], [], ["12"]])
    assert manage.run(["analyze", "--equation", str(path), "--out", str(out)]) == 0
    assert read(out / "resonance.json")["mode"] == "series"


@pytest.mark.parametrize("argv", [
    ["analyze"],
    ["analyze", "--equation", "missing.json"],
    ["locate", "--bogus"],
])
def test_input_errors_exit_with_one(argv, out):
    assert manage.run(argv + ["--out", str(out)]) == 1


def test_invalid_equation_file_writes_an_error_report(equation_file, out):
    path = equation_file(1, [["0"], ["1"]])
    assert manage.run(["analyze", "--equation", str(path), "--out", str(out)]) == 1
    error = read(out / "error.json")
    assert error["exit_code"] == 1
    assert error["error"] == "ValidationError"


def test_malformed_complex_argument(equation_file, out):
    path = equation_file(3, CUBIC)
    argv = ["continue", "--equation", str(path), "--y0", "one", "--yp0", "0", "--path", "0,0:1,0", "--out", str(out)]
    assert manage.run(argv) == 1
    assert read(out / "error.json")["error"] == "PreconditionError"


def test_expand_painleve_one(equation_file, out, capsys):
    path = equation_file(2, PAINLEVE_ONE)
    assert manage.run(["expand", "--equation", str(path), "--z0", "1,0", "--order", "8", "--out", str(out)]) == 0
    report = read(out / "expansion.json")
    coefficients = {c["j"]: c["value"] for c in report["coefficients"]}
    assert coefficients[4] == ["-1/10", "0"]
    assert coefficients[5] == ["-1/6", "0"]
    assert report["resonance_index"] == 6
    assert "exponent" in capsys.readouterr().out


def test_expand_obstructed(equation_file, out):
    path = equation_file(3, CUBIC_WITH_Z)
    argv = ["expand", "--equation", str(path), "--z0", "0,0", "--branch=-1", "--order", "10", "--out", str(out)]
    assert manage.run(argv) == 2
    error = read(out / "error.json")
    assert error["error"] == "ObstructionNonzero"
    assert error["details"]["branch"] == "-1"


def test_locate_writes_trajectory_and_singularity(equation_file, out):
    path = equation_file(3, CUBIC)
    argv = ["locate", "--equation", str(path), "--y0=-1,0", "--yp0=-1,0", "--path", "0,0:2,0",
            "--rel-tol", "1e-11", "--abs-tol", "1e-11", "--out", str(out)]
    assert manage.run(argv) == 0
    singularity = read(out / "singularity.json")
    assert singularity["z_star"] == pytest.approx([1.0, 0.0], abs=1e-8)
    assert singularity["method"] == "uv-chart"
    assert singularity["branch_class"] == "+1"
    with (out / "trajectory.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert len(rows) - 1 == read(out / "trajectory.json")["accepted_steps"]


def test_monodromy_command(equation_file, out):
    path = equation_file(3, CUBIC)
    argv = ["monodromy", "--equation", str(path), "--y0=-1,0", "--yp0=-1,0", "--path", "0,0:2,0", "--out", str(out)]
    assert manage.run(argv) == 0
    report = read(out / "monodromy.json")
    assert report["returns_after"] == 1
    assert report["singularity"]["N"] == 3


def test_scan_command(equation_file, out):
    path = equation_file(3, CUBIC)
    argv = ["scan", "--equation", str(path), "--z0", "0,0", "--y0", "1,0", "--yp0=-1,0",
            "--rays", "8", "--length", "2", "--threads", "2", "--out", str(out)]
    assert manage.run(argv) == 0
    entries = read(out / "scan.json")["entries"]
    assert [e["index"] for e in entries] == list(range(8))
    # y = 1/(z + 1): the pole lies on the ray pointing along the negative real axis
    found = [e["index"] for e in entries if e["singularity"]]
    assert found == [4]


def test_step_budget_exits_with_three(equation_file, out, monkeypatch):
    monkeypatch.setattr(settings, "max_steps", 5)
    path = equation_file(3, CUBIC)
    argv = ["continue", "--equation", str(path), "--y0=-1,0", "--yp0=-1,0", "--path", "0,0:0.9,0", "--out", str(out)]
    assert manage.run(argv) == 3
    assert read(out / "error.json")["error"] == "MaxStepsExceeded"
    assert (out / "trajectory.csv").exists()


def test_demo_warning(out):
    assert manage.run(["demo", "warning", "--out", str(out)]) == 0
    report = read(out / "demo.json")
    assert len(report["singularities"]) == 4
    assert max(report["errors"]) <= 1e-5


def test_unknown_demo(out):
    assert manage.run(["demo", "no-such-demo", "--out", str(out)]) == 1
    assert read(out / "error.json")["error"] == "UnknownDemoError"


def test_continue_a_demo_equation(out):
    argv = ["continue", "--demo", "smith", "--y0", "1,0", "--yp0", "0,0", "--path", "0,0:0.5,0", "--out", str(out)]
    assert manage.run(argv) == 0
    assert read(out / "trajectory.json")["termination"] == "completed"
