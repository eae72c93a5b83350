import json
import os

import numpy as np
import pytest

from crowdmatch.cli import main
from crowdmatch.config import save_config, ScenarioConfig
from crowdmatch.presets import build_preset, preset_ids, round_robin_counts
from crowdmatch.simulator import CSV_COLUMNS


@pytest.fixture
def tiny_config_path(tmp_path):
    cfg = ScenarioConfig(
        n_mus=4, n_types=3, tasks_per_type=(1, 1, 2), horizon=12,
        replications=2, master_seed=31, gt_samples=500,
    )
    path = tmp_path / "tiny.cfg"
    save_config(cfg, path)
    return path


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return header, lines[1:]


def test_run_writes_outputs(tiny_config_path, tmp_path):
    out = tmp_path / "out"
    code = main(["run", str(tiny_config_path), "--strategies", "ca-mab-sfs,o-daa",
                 "--out", str(out)])
    assert code == 0
    header, rows = read_csv(out / "metrics.csv")
    assert header == list(CSV_COLUMNS)
    assert len(rows) == 2 * 2 * 12  # strategies x replications x rounds
    summary = json.loads((out / "summary.json").read_text())
    assert summary["schema_version"] == 1
    assert set(summary["strategies"]) == {"ca-mab-sfs", "o-daa"}


def test_run_row_count_with_overrides(tiny_config_path, tmp_path):
    out = tmp_path / "out"
    code = main(["run", str(tiny_config_path), "--strategies", "mcsp-strategic",
                 "--out", str(out), "--replications", "1", "--rounds", "10"])
    assert code == 0
    _, rows = read_csv(out / "metrics.csv")
    assert len(rows) == 10


def test_missing_config_exits_2(tmp_path, capsys):
    code = main(["run", str(tmp_path / "absent.cfg"), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_strategy_exits_2(tiny_config_path, tmp_path):
    assert main(["run", str(tiny_config_path), "--strategies", "wat",
                 "--out", str(tmp_path / "o")]) == 2


def test_unknown_figure_exits_2(tmp_path):
    assert main(["preset", "fig99", "--out", str(tmp_path / "o")]) == 2


def test_byte_identical_reruns(tiny_config_path, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["run", str(tiny_config_path), "--strategies", "ca-mab-sfs",
                     "--out", str(out)]) == 0
    assert (out1 / "metrics.csv").read_bytes() == (out2 / "metrics.csv").read_bytes()
    assert (out1 / "summary.json").read_bytes() == (out2 / "summary.json").read_bytes()


def test_seed_env_override_and_flag_precedence(tiny_config_path, tmp_path, monkeypatch):
    base, enved, flagged = tmp_path / "base", tmp_path / "env", tmp_path / "flag"
    assert main(["run", str(tiny_config_path), "--strategies", "eps-greedy",
                 "--out", str(base)]) == 0
    monkeypatch.setenv("MCS_SEED", "12345")
    assert main(["run", str(tiny_config_path), "--strategies", "eps-greedy",
                 "--out", str(enved)]) == 0
    assert (base / "metrics.csv").read_bytes() != (enved / "metrics.csv").read_bytes()
    assert main(["run", str(tiny_config_path), "--strategies", "eps-greedy",
                 "--out", str(flagged), "--seed", "31"]) == 0
    assert (flagged / "metrics.csv").read_bytes() == (base / "metrics.csv").read_bytes()


def test_bad_env_seed_exits_2(tiny_config_path, tmp_path, monkeypatch):
    monkeypatch.setenv("MCS_SEED", "not-a-number")
    assert main(["run", str(tiny_config_path), "--out", str(tmp_path / "o")]) == 2


def test_preset_command_runs_downscaled(tmp_path, capsys):
    out = tmp_path / "preset"
    code = main(["preset", "fig10", "--out", str(out),
                 "--replications", "2", "--rounds", "40"])
    assert code == 0
    text = capsys.readouterr().out
    assert "free_offers_cumulative" in text
    header, rows = read_csv(out / "metrics.csv")
    assert header == list(CSV_COLUMNS)
    assert len(rows) == 3 * 2 * 40  # three threshold variants


def test_verify_small_passes(capsys):
    assert main(["verify", "--small"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 3 and "FAIL" not in out


def test_preset_definitions():
    assert set(preset_ids()) == {f"fig{i}" for i in range(2, 11)}
    fig8 = build_preset("fig8")
    cfg = fig8.runs[0].config
    assert cfg.n_mus == 10 and cfg.n_types == 10 and sum(cfg.tasks_per_type) == 10
    fig9 = build_preset("fig9")
    lams = sorted(run.config.repeat_prob for run in fig9.runs)
    assert lams == [0.0, 0.1, 0.4]
    fig10 = build_preset("fig10")
    thresholds = sorted(run.config.free_threshold for run in fig10.runs)
    assert thresholds == [0.25, 0.5, 1.0]
    assert round_robin_counts(25, 10) == (3, 3, 3, 3, 3, 2, 2, 2, 2, 2)


def test_preset_override_replications():
    preset = build_preset("fig8", replications=3, rounds=50, seed=1)
    assert preset.runs[0].config.replications == 3
    assert preset.runs[0].config.horizon == 50
    assert preset.runs[0].config.master_seed == 1
