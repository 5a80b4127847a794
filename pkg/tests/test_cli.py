"""Command-line entry point: exit codes, operator listing, output files."""

import json
import os

import pytest

from czframe.cli import main

QUICK = {
    "grid": {"L": 32, "N": 1024},
    "frame": {"a_min": 0.25, "a_max": 64, "s": 0.25},
    "diagnostics": ["pv"],
    "operators": ["hilbert"],
}


def _write_config(tmp_path, payload):
    p = tmp_path / "suite.json"
    p.write_text(json.dumps(payload))
    return str(p)


def test_list_operators(capsys):
    assert main(["--list-operators"]) == 0
    out = capsys.readouterr().out
    for label in ("hilbert", "damped_hilbert_1", "finite_rank", "zero"):
        assert label in out


def test_missing_arguments_exit_2(capsys):
    assert main([]) == 2
    assert main(["--config", "x.json"]) == 2
    assert main(["--out", "y"]) == 2


def test_unreadable_config_exit_2(tmp_path, capsys):
    assert main(["--config", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--config", str(bad), "--out", str(tmp_path / "o")]) == 2


def test_invalid_config_exit_2(tmp_path, capsys):
    cfgp = _write_config(tmp_path, {"bogus": 1})
    assert main(["--config", cfgp, "--out", str(tmp_path / "o")]) == 2


def test_quick_suite_exit_0_and_outputs(tmp_path, capsys):
    cfgp = _write_config(tmp_path, QUICK)
    out = tmp_path / "results"
    assert main(["--config", cfgp, "--out", str(out)]) == 0
    assert (out / "report.json").exists()
    assert (out / "summary.txt").exists()
    with open(out / "report.json") as fh:
        assert json.load(fh)["verdict"] == "PASS"


def test_failing_suite_exit_1(tmp_path, capsys):
    cfgp = _write_config(tmp_path, {**QUICK, "tolerances": {"pv_rel": 1e-12}})
    out = tmp_path / "results"
    assert main(["--config", cfgp, "--out", str(out)]) == 1
    with open(out / "report.json") as fh:
        assert json.load(fh)["verdict"] == "FAIL"


def test_seed_flag_overrides_config(tmp_path, capsys):
    cfgp = _write_config(tmp_path, {**QUICK, "seed": 1})
    out = tmp_path / "r"
    assert main(["--config", cfgp, "--out", str(out), "--seed", "7"]) == 0
    with open(out / "report.json") as fh:
        assert json.load(fh)["seed"] == 7
