"""Test the involab command line end to end"""

import json
from pathlib import Path

import pytest

from involab import scenarios
from involab.cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main
from involab.fields import ZeroDivisorError
from tests.utils import FIXTURES


def _run(capsys: pytest.CaptureFixture, *argv: str) -> tuple:
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_run_diag_one_t(capsys: pytest.CaptureFixture) -> None:
    status, out, _ = _run(capsys, "run", str(FIXTURES / "diag_one_t.toml"))
    assert status == EXIT_OK
    report = json.loads(out)
    assert report["dims"]["S"] == 2
    assert report["q_values"] == ["t", "1"]
    assert report["verdicts"]["decomposable"] == "true"
    assert report["verdicts"]["descent"] is True
    assert report["verdicts"]["septd_agree"] is True
    assert report["provenance"] == "certified-split"
    assert report["seed"] == 0
    assert "timings" in report


def test_run_is_reproducible(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    scenario = str(FIXTURES / "diag_one_t.toml")
    for out in (first, second):
        status, stdout, _ = _run(capsys, "run", scenario, "--no-timings", "--out", str(out))
        assert status == EXIT_OK
        assert stdout == ""
    assert first.read_bytes() == second.read_bytes()


def test_seed_override(capsys: pytest.CaptureFixture) -> None:
    status, out, _ = _run(
        capsys, "run", str(FIXTURES / "diag_one_t.toml"), "--seed", "7", "--budget", "10"
    )
    assert status == EXIT_OK
    report = json.loads(out)
    assert (report["seed"], report["budget"]) == (7, 10)


def test_inseparable_jump_scenario(capsys: pytest.CaptureFixture) -> None:
    status, out, _ = _run(capsys, "run", str(FIXTURES / "diag_one_t_jump.toml"))
    assert status == EXIT_OK
    (jump,) = json.loads(out)["tasks"]["jump"]
    assert jump["dims"] == {"F": 2, "K": 3}
    assert jump["jumped"] and jump["contained"]


def test_descent_over_inseparable_layer_is_a_usage_error(capsys: pytest.CaptureFixture) -> None:
    status, out, err = _run(capsys, "run", str(FIXTURES / "insep_descent.toml"))
    assert status == EXIT_USAGE
    assert out == ""
    assert "descent requires separable layers" in err
    assert "extensions[0]" in err


def test_malformed_polynomial_reports_the_token(capsys: pytest.CaptureFixture) -> None:
    status, _, err = _run(capsys, "run", str(FIXTURES / "bad_polynomial.toml"))
    assert status == EXIT_USAGE
    assert "algebra.form[1]" in err
    assert "at column 3 near '*'" in err


def test_symplectic_scenario(capsys: pytest.CaptureFixture) -> None:
    status, _, err = _run(capsys, "run", str(FIXTURES / "symplectic.toml"))
    assert status == EXIT_USAGE
    assert "symplectic" in err


def test_missing_scenario_file(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    status, _, err = _run(capsys, "run", str(tmp_path / "nope.toml"))
    assert status == EXIT_USAGE
    assert err.startswith("involab: error:")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["run"],
        ["suite", "--count", "-1"],
        ["run", "x.toml", "--seed", "abc"],
    ],
)
def test_usage_errors(capsys: pytest.CaptureFixture, argv: list) -> None:
    status, _, _ = _run(capsys, *argv)
    assert status == EXIT_USAGE


def test_version(capsys: pytest.CaptureFixture) -> None:
    status, out, _ = _run(capsys, "--version")
    assert status == EXIT_OK
    assert out.startswith("involab ")


def test_oracle_command(capsys: pytest.CaptureFixture) -> None:
    status, out, _ = _run(capsys, "oracle", str(FIXTURES / "transpose_gf4.toml"))
    assert status == EXIT_OK
    oracle = json.loads(out)["tasks"]["oracle"]
    assert oracle["equal"]
    assert oracle["dims"]["enumerated"] == oracle["dims"]["S"]


def test_oracle_needs_a_finite_field(capsys: pytest.CaptureFixture) -> None:
    status, _, err = _run(capsys, "oracle", str(FIXTURES / "diag_one_t.toml"))
    assert status == EXIT_USAGE
    assert "finite" in err


def test_indecomposable_instance_passes_its_checks(capsys: pytest.CaptureFixture) -> None:
    status, out, _ = _run(capsys, "run", str(FIXTURES / "indecomposable.toml"))
    assert status == EXIT_OK
    report = json.loads(out)
    assert report["verdicts"]["decomposable"] == "false"
    (septd,) = report["tasks"]["septd"]
    assert septd["pfister_oracle"] is False
    assert septd["determinant_obstructs"] is True
    assert septd["flagged"] == []


def test_failed_certificate_exits_with_one(
    capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch
) -> None:
    monkeypatch.setitem(scenarios.RUNNERS, scenarios.Task.ANALYZE, lambda s, r: ({}, False))
    status, out, _ = _run(capsys, "run", str(FIXTURES / "transpose_gf4.toml"))
    assert status == EXIT_CHECK_FAILED
    assert json.loads(out)["passed"] is False


def test_arithmetic_error_exits_with_one(
    capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch
) -> None:
    def broken(*args: object) -> None:
        raise ArithmeticError("members of S do not form a subspace")

    monkeypatch.setitem(scenarios.RUNNERS, scenarios.Task.ANALYZE, broken)
    status, _, err = _run(capsys, "run", str(FIXTURES / "transpose_gf4.toml"))
    assert status == EXIT_CHECK_FAILED
    assert "check failed" in err


def test_suite_command(capsys: pytest.CaptureFixture, tmp_path: Path) -> None:
    out = tmp_path / "suite.json"
    status, _, _ = _run(capsys, "suite", "--seed", "42", "--count", "0", "--out", str(out))
    assert status == EXIT_OK
    report = json.loads(out.read_text())
    assert report == {
        "count": 0,
        "digests": [],
        "failures": [],
        "instances": [],
        "passed": True,
        "seed": 42,
    }


def test_division_by_zero_in_a_literal_is_a_usage_error(
    capsys: pytest.CaptureFixture, tmp_path: Path
) -> None:
    scenario = tmp_path / "zero.toml"
    scenario.write_text(
        'tasks = ["analyze"]\n\n'
        '[field]\nbase = "GF(2)"\nlayers = ["rat:t"]\n\n'
        '[algebra]\ntype = "adjoint"\nform = ["1", "t/0"]\n',
        encoding="utf-8",
    )
    status, out, err = _run(capsys, "run", str(scenario))
    assert status == EXIT_USAGE
    assert out == ""
    assert "division by zero" in err


def test_zero_division_during_a_check_exits_with_one(
    capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch
) -> None:
    def broken(*args: object) -> None:
        raise ZeroDivisionError("zero has no inverse")

    monkeypatch.setitem(scenarios.RUNNERS, scenarios.Task.ANALYZE, broken)
    status, _, err = _run(capsys, "run", str(FIXTURES / "transpose_gf4.toml"))
    assert status == EXIT_CHECK_FAILED
    assert "check failed" in err


def test_reducible_modulus_is_a_usage_error(
    capsys: pytest.CaptureFixture, monkeypatch: pytest.MonkeyPatch
) -> None:
    def broken(*args: object) -> None:
        raise ZeroDivisorError("theta+1 is a zero divisor: x^3+1 is reducible")

    monkeypatch.setitem(scenarios.RUNNERS, scenarios.Task.ANALYZE, broken)
    status, _, err = _run(capsys, "run", str(FIXTURES / "transpose_gf4.toml"))
    assert status == EXIT_USAGE
    assert "reducible" in err
