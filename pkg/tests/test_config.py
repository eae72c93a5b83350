import pytest

from crowdmatch.config import ConfigError, ScenarioConfig, load_config, save_config


def test_defaults_validate():
    ScenarioConfig().validate()


def test_roundtrip(tmp_path):
    cfg = ScenarioConfig(n_mus=7, n_types=3, tasks_per_type=(1, 2, 3),
                         repeat_prob=0.25, master_seed=99, deadlines_s=(100.0, 110.0, 120.0))
    path = tmp_path / "scenario.cfg"
    save_config(cfg, path)
    assert load_config(path) == cfg


def test_partial_file_keeps_defaults(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text("n_mus = 12\nrepeat_prob = 0.2  # comment\n\n# full-line comment\n")
    cfg = load_config(path)
    assert cfg.n_mus == 12 and cfg.repeat_prob == 0.2
    assert cfg.n_types == ScenarioConfig().n_types


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text("definitely_not_a_key = 3\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_bad_value_rejected(tmp_path):
    path = tmp_path / "s.cfg"
    path.write_text("n_mus = banana\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_missing_file_rejected(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.cfg")


@pytest.mark.parametrize(
    "changes",
    [
        dict(n_mus=0),
        dict(repeat_prob=1.0),
        dict(repeat_prob=-0.1),
        dict(free_threshold=0.0),
        dict(free_phase_end=0),
        dict(tasks_per_type=(1, 2)),  # wrong length for 10 types
        dict(size_min_mbit=80.0, size_max_mbit=50.0),
        dict(pay_mode="barter"),
        dict(deadlines_s=(1.0,) * 9),
        dict(gt_samples=0),
    ],
)
def test_validation_rejections(changes):
    with pytest.raises(ConfigError):
        ScenarioConfig(**changes).validate()


def test_replace_validates():
    with pytest.raises(ConfigError):
        ScenarioConfig().replace(horizon=0)
    assert ScenarioConfig().replace(horizon=5).horizon == 5
