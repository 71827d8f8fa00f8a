import argparse
import json
import math
import sys
from fractions import Fraction

import pytest

from dirberg.services.config import build_run_config
from dirberg.services.errors import ConfigError, DomainError, QuadratureError, exit_code_for
from dirberg.services.output import atomic_write, format_float, plain, to_json_text
from dirberg_cli.dirberg_cli import cli, count

EXAMPLE = '{"N": 3, "coeffs": [[2, 1, 0], [3, 1, 0]]}'


def run_cli(monkeypatch, capsys, *args):
    monkeypatch.setattr(sys, "argv", ["dirberg", *args])
    with pytest.raises(SystemExit) as exit_info:
        cli()
    out, err = capsys.readouterr()
    return exit_info.value.code, out, err


def test_no_arguments(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys)
    assert code == 2
    assert "norm" in out


def test_norm_of_example(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys, "norm", "--space", "h2", "--poly", EXAMPLE)
    assert code == 0
    data = json.loads(out)
    assert data["estimate"]["value"] == pytest.approx(math.sqrt(2), rel=1e-15)
    assert data["estimate"]["method"] == "exact"
    assert "suites" not in data["config"]
    code, out, _ = run_cli(monkeypatch, capsys, "norm", "--space", "b2", "--poly", EXAMPLE)
    assert code == 0
    assert json.loads(out)["estimate"]["value"] == pytest.approx(1.0, rel=1e-15)


def test_monte_carlo_norm_is_reproducible(monkeypatch, capsys):
    args = ("norm", "--space", "hp", "--p", "3", "--poly", EXAMPLE, "--samples", "5000", "--seed", "3")
    code, first, _ = run_cli(monkeypatch, capsys, *args)
    assert code == 0
    _, second, _ = run_cli(monkeypatch, capsys, *args)
    assert first == second
    estimate = json.loads(first)["estimate"]
    assert estimate["method"] == "monte-carlo"
    assert estimate["seed"] == 3
    assert estimate["samples"] == 5000


def test_missing_polynomial(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "norm", "--space", "h2")
    assert code == 2
    assert "dirberg: a polynomial is required" in err


def test_eval_norm_outside_half_plane(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "eval-norm", "--space", "hp", "--sigma", "0.4")
    assert code == 2
    assert "Re(s) > 1/2" in err


def test_eval_norm(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys, "eval-norm", "--space", "hp", "--s", "1.0", "3.0")
    assert code == 0
    data = json.loads(out)
    assert data["point"] == [1.0, 3.0]
    assert data["bound"]["value"] == pytest.approx(math.pi / math.sqrt(6))
    assert data["bound"]["kind"] == "exact"
    code, out, _ = run_cli(monkeypatch, capsys, "eval-norm", "--space", "disk", "--z", "0.5", "0")
    assert code == 0
    assert json.loads(out)["bound"]["value"] >= 4 / 3


def test_eval_scan_writes_csv(monkeypatch, capsys, tmp_path):
    target = tmp_path / "scan.csv"
    code, _, err = run_cli(monkeypatch, capsys, "--output", str(target), "eval-scan", "--space", "hp",
                           "--sigma-min", "0.6", "--sigma-max", "1.0", "--points", "3")
    assert code == 0
    assert "Output written" in err
    lines = target.read_text().splitlines()
    assert lines[0] == "sigma,value,kind,space,p"
    assert len(lines) == 4
    assert lines[-1].startswith("1,") or lines[-1].startswith("1.0,")


def test_eval_scan_rejects_disk(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "eval-scan", "--space", "disk")
    assert code == 2
    assert "invalid choice: 'disk'" in err


def test_kernel(monkeypatch, capsys):
    code, out, _ = run_cli(monkeypatch, capsys, "kernel", "--space", "b2", "--sigma", "1.0", "--w", "1.0", "0.0",
                           "--N", "1000")
    assert code == 0
    kernel = json.loads(out)["kernel"]
    assert kernel["N"] == 1000
    assert kernel["value"][0] < (math.pi ** 2 / 6) ** 2
    code, _, _ = run_cli(monkeypatch, capsys, "kernel", "--space", "b2", "--sigma", "1.0")
    assert code == 2


def test_unknown_suite(monkeypatch, capsys):
    code, _, err = run_cli(monkeypatch, capsys, "verify", "--suite", "nope")
    assert code == 2
    assert "unknown suite" in err


def test_verify_and_report(monkeypatch, capsys, tmp_path):
    config = tmp_path / "quick.json"
    config.write_text(json.dumps({"suites": {"binomial_max_n": 8, "binomial_degree": 40, "alternating_max": 10,
                                             "divisor_max_m": 3, "divisor_max_n": 1000, "zeta_power_n": 200}}))
    reports = tmp_path / "reports.json"
    code, out, err = run_cli(monkeypatch, capsys, "--config", str(config), "verify", "--suite", "identities",
                             "--json", str(reports))
    assert code == 0
    data = json.loads(out)
    assert data["suite"] == "identities"
    assert data["config"]["binomial_max_n"] == 8
    assert [r["status"] for r in data["reports"]] == ["pass"] * 6
    assert "runtime_ms" not in data["reports"][0]
    assert reports.read_text() == out
    assert "binomial_identity" in err

    code, out, _ = run_cli(monkeypatch, capsys, "report", "--input", str(reports))
    assert code == 0
    assert "kronecker_flow" in out
    assert "runtime_ms" not in out


def test_config_precedence(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"p": 4.0, "space": "ap", "measure": {"type": "alpha", "alpha": 1.0}}))
    cfg = build_run_config({"p": None, "space": "hp", "measure": {"type": None, "alpha": 0.5}}, str(path))
    assert cfg.p == 4.0
    assert cfg.space == "hp"
    assert cfg.measure.type == "alpha"
    assert cfg.measure.alpha == 0.5
    assert cfg.sampler.samples == 100_000
    with pytest.raises(ConfigError):
        build_run_config({"p": 0.5})
    with pytest.raises(ConfigError):
        build_run_config({}, str(tmp_path / "missing.json"))
    with pytest.raises(ConfigError):
        build_run_config({"measure": {"type": "density"}})


def test_count():
    assert count("1e6") == 1_000_000
    assert count("42") == 42
    with pytest.raises(argparse.ArgumentTypeError):
        count("1.5")


def test_output_formatting():
    assert format_float(1.0) == "1.0"
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(float("nan")) == "null"
    assert plain(complex(1, 2)) == [1.0, 2.0]
    assert plain(Fraction(4, 2)) == 2
    assert to_json_text({"a": 1.0, "b": [Fraction(1, 3)]}) == '{"a": 1.0, "b": ["1/3"]}'


def test_atomic_write(tmp_path):
    target = tmp_path / "out.json"
    atomic_write(str(target), "first")
    atomic_write(str(target), "second")
    assert target.read_text() == "second"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


def test_exit_codes():
    assert exit_code_for(DomainError("x")) == 2
    assert exit_code_for(ConfigError("x")) == 2
    assert exit_code_for(QuadratureError("x")) == 3
    assert exit_code_for(ValueError("x")) == 3
