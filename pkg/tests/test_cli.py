import json

import pytest

from pntzeta.cli import RunConfig, UsageError, main, parse_args, read_config_file, run


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_basic():
    cfg = parse_args(["zero-sum", "--x=0.01", "--zeros=path"])
    assert cfg == RunConfig("zero-sum", {"x": 0.01, "zeros": "path"}, "csv", None)


def test_parse_errors():
    with pytest.raises(UsageError, match="--x"):
        parse_args(["--x=abc"])
    with pytest.raises(UsageError, match="--x"):
        parse_args(["zero-sum", "--x=abc"])
    with pytest.raises(UsageError, match="unknown key"):
        parse_args(["zero-sum", "--bogus=1"])
    with pytest.raises(UsageError, match="malformed"):
        parse_args(["zero-sum", "x=1"])
    with pytest.raises(UsageError, match="missing required"):
        parse_args(["psi"])
    with pytest.raises(UsageError, match="twice"):
        parse_args(["zero-sum", "--x=0.1", "--x=0.2"])
    with pytest.raises(UsageError, match="outside"):
        parse_args(["converse", "--s=7"])


def test_config_file_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# settings\nx = 0.5  # comment\n")
    assert read_config_file(path) == {"x": "0.5"}
    assert parse_args(["zero-sum", f"--config={path}"]).parameters["x"] == 0.5
    assert parse_args(["zero-sum", f"--config={path}", "--x=0.01"]).parameters["x"] == 0.01


def test_unknown_command(capsys):
    code, out, err = run_cli(["bogus"], capsys)
    assert code == 1
    assert "usage" in err
    assert run(RunConfig("bogus", {})) == 1


def test_verify_analytic_json(capsys):
    code, out, _ = run_cli(["verify-analytic", "--format=json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "pass"
    assert doc["summary"]["slope"] >= 1.4
    assert all("slope" in r for r in doc["rows"])


def test_verify_analytic_ablation_fails(capsys):
    code, out, _ = run_cli(["verify-analytic", "--constant_term=0", "--format=json"], capsys)
    assert code == 2
    assert json.loads(out)["verdict"] == "fail"


def test_zeros_verify_no_sign_change(capsys):
    code, out, err = run_cli(["zeros-verify", "--gamma=14.9", "--format=json"], capsys)
    assert code == 2
    assert json.loads(out)["verdict"] == "no sign change"


def test_zeros_verify_table(capsys):
    code, out, _ = run_cli(["zeros-verify", "--format=json"], capsys)
    assert code == 0
    assert json.loads(out)["summary"]["verified"] == 100


def test_csv_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["tauber-table", f"--output={a}"]) == 0
    assert main(["tauber-table", f"--output={b}"]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "x,value,deviation,tail_bound"
    assert lines[1].startswith("0.10000000000000001,")


def test_json_round_trip_of_parameters(capsys):
    argv = ["karamata", "--coeffs=0,1,-1", "--x_list=0.1,0.01", "--format=json"]
    code, out, _ = run_cli(argv, capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["parameters"] == parse_args(argv).parameters


def test_file_errors_are_usage_errors(tmp_path, capsys):
    bad = tmp_path / "z.txt"
    bad.write_text("14.13\nnope\n")
    code, _, err = run_cli(["zero-sum", f"--zeros={bad}"], capsys)
    assert code == 1
    assert "line 2" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["sieve", "--N=100"],
        ["psi", "--x=1000"],
        ["converse", "--s=3", "--X_max=1e5"],
        ["zeros-count", "--T=30"],
        ["zero-sum", "--x=0.1"],
        ["mellin-check", "--x_list=1"],
        ["apf-recover", "--X=1e4"],
        ["apf-witness"],
        ["apf-period"],
        ["phi-oscillation", "--k_max=14"],
        ["gamma-bound", "--step=0.5"],
    ],
)
def test_commands_succeed(argv, capsys):
    code, out, err = run_cli(argv, capsys)
    assert code == 0, err
    assert out.count("\n") >= 2


def test_series_file(tmp_path, capsys):
    from pntzeta.apf import FrequencySeries

    path = tmp_path / "s.json"
    path.write_text(json.dumps(FrequencySeries.symmetric([1.0], [1.0]).to_records()))
    code, out, _ = run_cli(["apf-period", f"--series={path}", "--format=json"], capsys)
    assert code == 0
    assert json.loads(out)["verdict"] == "found"
    code, _, err = run_cli(["apf-witness", f"--series={path}", "--count=3"], capsys)
    assert code == 1
    assert "mutually exclusive" in err
