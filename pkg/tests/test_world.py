import numpy as np
import pytest

from crowdmatch.config import ScenarioConfig
from crowdmatch.model import MEGABIT
from crowdmatch.world import build_world, expected_total_time, ground_truth_expectations


def degenerate_config(**over):
    """All static draws collapse to a point; all per-round noise off."""
    base = dict(
        n_mus=3, n_types=2, tasks_per_type=(1, 1),
        size_min_mbit=60.0, size_max_mbit=60.0,
        complexity_min=250.0, complexity_max=250.0,
        sense_time_min_s=100.0, sense_time_max_s=100.0,
        comm_time_min_s_per_mbit=0.05, comm_time_max_s_per_mbit=0.05,
        cpu_freq_min_hz=1e9, cpu_freq_max_hz=1e9,
        cost_time_min=0.008, cost_time_max=0.008,
        cost_energy_min=0.003, cost_energy_max=0.003,
        sense_time_std_s=0.0, comm_time_std_s_per_mbit=0.0,
        cpu_freq_std_hz=0.0, size_rel_std=0.0,
        horizon=5, replications=1, master_seed=1,
    )
    base.update(over)
    return ScenarioConfig(**base)


def test_build_world_determinism():
    cfg = ScenarioConfig(n_mus=5, n_types=3, tasks_per_type=(1, 2, 1), horizon=10)
    w1 = build_world(cfg, np.random.default_rng(42))
    w2 = build_world(cfg, np.random.default_rng(42))
    assert np.array_equal(w1.sense_means, w2.sense_means)
    assert np.array_equal(w1.deadlines, w2.deadlines)
    assert np.array_equal(w1.cost_time, w2.cost_time)


def test_world_shapes_and_ranges():
    cfg = ScenarioConfig(n_mus=8, n_types=4, tasks_per_type=None,
                         tasks_per_type_min=2, tasks_per_type_max=5, horizon=10)
    w = build_world(cfg, np.random.default_rng(0))
    assert w.sense_means.shape == (8, 4)
    assert ((w.counts >= 2) & (w.counts <= 5)).all()
    assert ((w.sizes >= cfg.size_min_mbit) & (w.sizes <= cfg.size_max_mbit)).all()
    assert np.allclose(w.earnings, 1.4 + 3.0 * w.sizes)


def test_time_cost_band_excluded():
    cfg = ScenarioConfig(n_mus=400, n_types=2, tasks_per_type=(1, 1), horizon=10)
    w = build_world(cfg, np.random.default_rng(1))
    paid = cfg.pay_factor * cfg.pay_time_rate
    assert not ((w.cost_time > paid - cfg.cost_time_band)
                & (w.cost_time < paid + cfg.cost_time_band)).any()
    assert ((w.cost_time >= cfg.cost_time_min) & (w.cost_time <= cfg.cost_time_max)).all()


def test_deadline_rule():
    cfg = degenerate_config()
    w = build_world(cfg, np.random.default_rng(0))
    # population-average expected completion time, times the slack
    total = 100.0 + 250.0 * 60.0 * MEGABIT / 1e9 + 0.05 * 60.0
    assert np.allclose(w.deadlines, cfg.deadline_slack * total)
    explicit = degenerate_config(deadlines_s=(120.0, 140.0))
    w2 = build_world(explicit, np.random.default_rng(0))
    assert np.allclose(w2.deadlines, [120.0, 140.0])


def test_expected_total_time_shape():
    cfg = degenerate_config()
    w = build_world(cfg, np.random.default_rng(0))
    mat = expected_total_time(w.sense_means, w.comm_means, w.cpu_means, w.sizes, w.complexity)
    assert mat.shape == (3, 2)
    assert np.allclose(mat, 100.0 + 15.0 + 3.0)


def test_ground_truth_zero_variance_equals_closed_form():
    cfg = degenerate_config()
    w = build_world(cfg, np.random.default_rng(0))
    table = ground_truth_expectations(w, samples=50, rng=np.random.default_rng(1))
    t_total = 100.0 + 250.0 * 60.0 * MEGABIT / 1e9 + 0.05 * 60.0  # 118 s
    energy = 1.0 * 15.0 + 0.2 * 3.0
    pay = 1.1 * (0.01 * t_total + 0.004 * energy)
    own_cost = 0.008 * t_total + 0.003 * energy
    assert np.allclose(table.p_met, 1.0)
    assert np.allclose(table.mean_time, t_total)
    assert np.allclose(table.mean_energy, energy)
    assert np.allclose(table.mu_utility, pay - own_cost)
    assert np.allclose(table.mcsp_utility, (1.4 + 3.0 * 60.0) - pay)
    assert np.allclose(table.se_mu_utility, 0.0)


def test_ground_truth_deadline_always_met_when_loose():
    cfg = degenerate_config(deadlines_s=(1e4, 1e4), sense_time_std_s=10.0)
    w = build_world(cfg, np.random.default_rng(0))
    table = ground_truth_expectations(w, samples=200, rng=np.random.default_rng(1))
    assert np.allclose(table.p_met, 1.0)


def test_ground_truth_self_consistency_with_more_samples():
    cfg = ScenarioConfig(n_mus=4, n_types=3, tasks_per_type=(1, 1, 1), horizon=10)
    w = build_world(cfg, np.random.default_rng(3))
    small = ground_truth_expectations(w, samples=4000, rng=np.random.default_rng(10))
    big = ground_truth_expectations(w, samples=8000, rng=np.random.default_rng(11))
    spread = np.sqrt(small.se_mu_utility**2 + big.se_mu_utility**2) + 1e-12
    assert (np.abs(small.mu_utility - big.mu_utility) < 4.0 * spread).all()


def test_ground_truth_determinism():
    cfg = ScenarioConfig(n_mus=3, n_types=2, tasks_per_type=(1, 1), horizon=10)
    w = build_world(cfg, np.random.default_rng(3))
    a = ground_truth_expectations(w, samples=500, rng=np.random.default_rng(9))
    b = ground_truth_expectations(w, samples=500, rng=np.random.default_rng(9))
    assert np.array_equal(a.mu_utility, b.mu_utility)
    assert np.array_equal(a.p_met, b.p_met)
