"""CLI behaviour: exit codes, payload schemas, byte determinism."""

import json
import subprocess
import sys

import pytest

from stringchase.cli import EXIT_BUDGET, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, RunRecord, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_builtin_converges(capsys):
    code, out, _ = run_cli(capsys, "solve", "--builtin", "reflect1d", "--tol", "1e-9")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["z"] == [0.5]
    assert payload["residual"] == 0.0
    assert payload["converged"] is True
    assert payload["m_final"] == 2
    assert set(payload["certificate"]) == {"base", "perm", "labels"}
    assert sorted(payload["certificate"]["labels"]) == [0, 1]
    assert list(payload["history"][0]) == ["m", "residual", "diameter", "evals"]


def test_solve_map_expression(capsys):
    code, out, _ = run_cli(
        capsys, "solve", "--map", "cos(x1)", "--n", "1", "--tol", "1e-3"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert abs(payload["z"][0] - 0.739085) <= 1e-3


def test_solve_bad_variable_index(capsys):
    code, out, err = run_cli(capsys, "solve", "--map", "x3", "--n", "2")
    assert code == EXIT_USAGE
    assert out == ""
    assert "x3" in err


def test_solve_not_converged_exit_code(capsys):
    code, out, _ = run_cli(
        capsys, "solve", "--builtin", "dottie", "--tol", "1e-15", "--max-m", "16"
    )
    assert code == EXIT_CHECK_FAILED
    payload = json.loads(out)
    assert payload["converged"] is False


def test_solve_requires_map_or_builtin(capsys):
    code, _, err = run_cli(capsys, "solve", "--tol", "1e-3")
    assert code == EXIT_USAGE
    assert err


def test_solve_n_mismatch(capsys):
    code, _, err = run_cli(capsys, "solve", "--builtin", "rot90", "--n", "1")
    assert code == EXIT_USAGE
    assert "rot90" in err


def test_solve_csv_history(capsys):
    code, out, _ = run_cli(capsys, "solve", "--builtin", "avg-0.8", "--tol", "1e-2", "--csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "m,residual,diameter,evals"
    assert len(lines) > 1
    first = lines[1].split(",")
    assert first[0] == "2"


def test_verify_parity_builtin(capsys):
    code, out, _ = run_cli(capsys, "verify-parity", "--builtin", "reflect1d", "--m", "4")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["levels"] == [
        {"k": 1, "S1": 1, "S2": 1, "T1": 1, "T2": 1, "identity_ok": True, "odd_ok": True}
    ]


def test_verify_parity_const_2d(capsys):
    code, out, _ = run_cli(
        capsys, "verify-parity", "--builtin", "const-0.5,0.5", "--m", "2"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["levels"][1]["k"] == 2
    assert payload["levels"][1]["S1"] == 1


def test_verify_parity_budget_exceeded(capsys):
    code, _, err = run_cli(
        capsys,
        "verify-parity", "--map", "x1; x2; x3", "--n", "3", "--m", "50",
        "--budget", "1000",
    )
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_budget_env_override(capsys, monkeypatch):
    monkeypatch.setenv("STRINGCHASE_BUDGET", "2")
    code, _, err = run_cli(capsys, "verify-parity", "--builtin", "reflect1d", "--m", "4")
    assert code == EXIT_BUDGET
    # explicit flag wins over the environment
    code, out, _ = run_cli(
        capsys, "verify-parity", "--builtin", "reflect1d", "--m", "4", "--budget", "1000"
    )
    assert code == EXIT_OK


def test_trace_json_shape(capsys):
    code, out, _ = run_cli(capsys, "trace", "--builtin", "reflect1d", "--m", "4")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["outcome"] == "found_fully_labeled"
    assert [s["level"] for s in payload["steps"]] == [0, 1, 1]
    final = payload["steps"][-1]
    assert final["exit"] is None
    assert set(final) == {"level", "base", "perm", "entry", "exit"}


def test_trace_adjacency_checkable_from_json(capsys):
    code, out, _ = run_cli(
        capsys, "trace", "--builtin", "const-0.5,0.5", "--m", "2"
    )
    assert code == EXIT_OK
    steps = json.loads(out)["steps"]

    def verts(step):
        pts = [tuple(step["base"])]
        cur = list(step["base"])
        for axis in step["perm"]:
            cur[axis - 1] += 1
            pts.append(tuple(cur))
        return set(pts)

    for a, b in zip(steps, steps[1:]):
        assert len(verts(a) & verts(b)) == max(a["level"], b["level"])


def test_trace_svg_output(capsys, tmp_path):
    svg_path = tmp_path / "walk.svg"
    code, out, _ = run_cli(
        capsys, "trace", "--builtin", "const-0.5,0.5", "--m", "2", "--svg", str(svg_path)
    )
    assert code == EXIT_OK
    body = svg_path.read_text()
    assert body.startswith("<svg")
    assert body.count("<polyline") >= 2
    assert "<circle" in body
    assert "#d62728" in body  # highlighted certificate string


def test_trace_svg_rejects_wrong_dimension(capsys, tmp_path):
    code, _, err = run_cli(
        capsys,
        "trace", "--map", "x1; x2; x3", "--n", "3", "--m", "2",
        "--svg", str(tmp_path / "walk.svg"),
    )
    assert code == EXIT_USAGE
    assert "n=2" in err


def test_labels_csv_reflect(capsys):
    code, out, _ = run_cli(capsys, "labels", "--builtin", "reflect1d", "--m", "4")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "i1,x1,label"
    assert len(lines) == 6
    assert [line.split(",")[-1] for line in lines[1:]] == ["0", "0", "1", "1", "1"]
    assert lines[1].split(",")[0] == "0"


def test_labels_csv_const_2d(capsys):
    code, out, _ = run_cli(capsys, "labels", "--builtin", "const-0.5,0.5", "--m", "2")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "i1,i2,x1,x2,label"
    assert len(lines) == 10
    origin = lines[1].split(",")
    assert origin[:2] == ["0", "0"] and origin[-1] == "0"


def test_solve_oracle_engine_respects_budget(capsys):
    code, _, err = run_cli(
        capsys,
        "solve", "--builtin", "rot90", "--engine", "oracle",
        "--initial-m", "4", "--budget", "10",
    )
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_bad_grid_resolution_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "labels", "--builtin", "rot90", "--m", "0")
    assert code == EXIT_USAGE
    assert "resolution" in err


def test_labels_budget(capsys):
    code, _, _ = run_cli(
        capsys, "labels", "--builtin", "rot90", "--m", "2000", "--budget", "1000"
    )
    assert code == EXIT_BUDGET


def test_record_round_trip(capsys, tmp_path):
    record_path = tmp_path / "run.json"
    code, out, _ = run_cli(
        capsys,
        "solve", "--builtin", "reflect1d", "--tol", "1e-9", "--record", str(record_path),
    )
    assert code == EXIT_OK
    record = RunRecord.from_json(record_path.read_text())
    assert record.command == "solve"
    assert record.arguments[0] == "solve"
    assert record.payload == json.loads(out)
    assert json.loads(record.to_json()) == json.loads(record_path.read_text())


@pytest.mark.parametrize(
    "argv",
    [
        ("solve", "--builtin", "reflect1d", "--tol", "1e-9"),
        ("solve", "--builtin", "dottie", "--tol", "1e-3", "--csv"),
        ("verify-parity", "--builtin", "const-0.5,0.5", "--m", "3"),
        ("trace", "--map", "1 - x2; x1", "--n", "2", "--m", "4"),
        ("labels", "--builtin", "rot90", "--m", "3"),
    ],
)
def test_stdout_is_byte_identical_across_runs(capsys, argv):
    first = run_cli(capsys, *argv)
    second = run_cli(capsys, *argv)
    assert first == second
    assert first[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "stringchase", "solve", "--builtin", "reflect1d"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["converged"] is True


def test_float_formatting_17_digits(capsys):
    _, out, _ = run_cli(capsys, "labels", "--builtin", "reflect1d", "--m", "3")
    # 1/3 printed at 17 significant digits
    assert "0.33333333333333331" in out
