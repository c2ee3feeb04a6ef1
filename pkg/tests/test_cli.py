"""CLI contract: config validation, CSV format, metadata round-trip."""

import csv
import hashlib
import json

import pytest
from click.testing import CliRunner

from xssh.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def _write_config(tmp_path, payload):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_even_n_cells_exits_2_with_field_error(runner, tmp_path):
    cfg = _write_config(tmp_path, {"system": {"n_cells": 4}})
    result = runner.invoke(main, ["spectrum", "--config", cfg, "--out", str(tmp_path)])
    assert result.exit_code == 2
    record = json.loads(result.output.strip().splitlines()[-1])
    assert record["error"] == "ConfigError"
    assert "n_cells" in record["message"]


def test_malformed_json_exits_2(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    result = runner.invoke(main, ["spectrum", "--config", str(path), "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_unknown_system_key_rejected(runner, tmp_path):
    cfg = _write_config(tmp_path, {"system": {"n_cells": 5, "coupling": 1.0}})
    result = runner.invoke(main, ["spectrum", "--config", cfg, "--out", str(tmp_path)])
    assert result.exit_code == 2
    assert "unknown keys" in result.output


def test_scenario_mismatch_rejected(runner, tmp_path):
    cfg = _write_config(tmp_path, {"scenario": "swap"})
    result = runner.invoke(main, ["spectrum", "--config", cfg, "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_spectrum_csv_format_and_metadata(runner, tmp_path):
    out = tmp_path / "run"
    result = runner.invoke(main, ["spectrum", "--out", str(out)])
    assert result.exit_code == 0, result.output
    raw = (out / "spectrum.csv").read_bytes()
    assert b"\r" not in raw  # LF only
    text = raw.decode("utf-8")
    rows = list(csv.DictReader(text.splitlines()))
    assert set(rows[0]) == {"index", "energy", "parity", "ipr", "is_edge"}
    assert len(rows) == 10  # default N = 5 -> one chain, 10 sites
    assert sum(int(r["is_edge"]) for r in rows) == 2
    # 17 significant digits survive a float round-trip.
    for r in rows:
        assert format(float(r["energy"]), ".17g") == r["energy"]

    metadata = json.loads((out / "spectrum.json").read_text(encoding="utf-8"))
    assert metadata["scenario"] == "spectrum"
    assert metadata["content_sha256"] == hashlib.sha256(raw).hexdigest()
    assert metadata["system"]["n_cells"] == 5


def test_metadata_round_trip_bit_identical(runner, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    cfg = _write_config(tmp_path, {"n_times": 40, "t_max": 100.0})
    assert runner.invoke(main, ["transfer", "--config", cfg, "--out", str(out_a)]).exit_code == 0
    meta = str(out_a / "transfer.json")
    assert runner.invoke(main, ["transfer", "--config", meta, "--out", str(out_b)]).exit_code == 0
    assert (out_a / "transfer.csv").read_bytes() == (out_b / "transfer.csv").read_bytes()


def test_transfer_peak_population(runner, tmp_path):
    out = tmp_path / "run"
    result = runner.invoke(main, ["transfer", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader((out / "transfer.csv").read_text().splitlines()))
    assert max(float(r["pop_2S"]) for r in rows) >= 0.99


def test_calibrate_emits_summary_json(runner, tmp_path):
    out = tmp_path / "run"
    result = runner.invoke(main, ["calibrate", "--out", str(out)])
    assert result.exit_code == 0, result.output
    summary = json.loads((out / "calibrate.result.json").read_text(encoding="utf-8"))
    assert set(summary) == {"k_minus", "k_plus", "t_swap", "fidelity"}
    assert summary["fidelity"] > 0.999


def test_disorder_seed_flag_changes_draws(runner, tmp_path):
    args = ["disorder", "--instances", "2"]
    cfg = _write_config(tmp_path, {"delta_fractions": [0.25]})
    out_a, out_b, out_c = (str(tmp_path / x) for x in "abc")
    assert runner.invoke(main, args + ["--config", cfg, "--seed", "1", "--out", out_a]).exit_code == 0
    assert runner.invoke(main, args + ["--config", cfg, "--seed", "1", "--out", out_b]).exit_code == 0
    assert runner.invoke(main, args + ["--config", cfg, "--seed", "2", "--out", out_c]).exit_code == 0
    read = lambda p: (tmp_path / p / "disorder.csv").read_bytes()  # noqa: E731
    assert read("a") == read("b")
    assert read("a") != read("c")


def test_dissipative_rejects_bad_initial(runner, tmp_path):
    cfg = _write_config(tmp_path, {"initial": "plasma"})
    result = runner.invoke(main, ["dissipative", "--config", cfg, "--out", str(tmp_path)])
    assert result.exit_code == 2
