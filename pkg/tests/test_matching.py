import numpy as np
import pytest

from crowdmatch.matching import (
    PreferenceProfile,
    assignment_welfare,
    brute_force_max_welfare,
    count_blocking_pairs,
    deferred_acceptance,
    enumerate_stable_assignments,
    is_stable,
    iter_assignments,
    max_social_welfare,
)
from crowdmatch.verify import random_instance


def profile(mu, mcsp, counts):
    return PreferenceProfile(
        mu_utility=np.asarray(mu, dtype=np.float64),
        mcsp_utility=np.asarray(mcsp, dtype=np.float64),
        counts=np.asarray(counts, dtype=np.int64),
    )


def test_single_pair_matches():
    prefs = profile([[0.5]], [[1.0]], [1])
    assert deferred_acceptance(prefs).tolist() == [0]


def test_opposed_preferences_each_gets_top_choice():
    # units prefer different types; the platform is indifferent enough
    prefs = profile([[0.9, 0.1], [0.1, 0.9]], [[1.0, 1.0], [1.0, 1.0]], [1, 1])
    assert deferred_acceptance(prefs).tolist() == [0, 1]


def test_platform_veto_leaves_unit_unmatched():
    prefs = profile([[0.5, 0.6]], [[-0.1, -0.2]], [1, 1])
    assert deferred_acceptance(prefs).tolist() == [-1]


def test_contested_type_goes_to_platform_favorite():
    prefs = profile([[0.9], [0.8]], [[0.2], [0.9]], [1])
    assert deferred_acceptance(prefs).tolist() == [-1, 0]


def test_da_stable_on_random_instances():
    rng = np.random.default_rng(0)
    for _ in range(60):
        n_mus, n_types = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        prefs = profile(
            rng.uniform(0.0, 1.0, (n_mus, n_types)),
            rng.uniform(-1.0, 1.0, (n_mus, n_types)),
            rng.integers(1, 4, n_types),
        )
        assert is_stable(deferred_acceptance(prefs), prefs)


def test_da_scale_invariance():
    rng = np.random.default_rng(1)
    prefs = profile(rng.uniform(0, 1, (5, 4)), rng.uniform(-1, 1, (5, 4)), [1, 2, 1, 1])
    scaled = profile(prefs.mu_utility * 7.3, prefs.mcsp_utility * 7.3, prefs.counts)
    assert np.array_equal(deferred_acceptance(prefs), deferred_acceptance(scaled))


def test_blocking_pairs_of_da_output_is_zero():
    rng = np.random.default_rng(2)
    prefs = random_instance(rng)
    summary = count_blocking_pairs(deferred_acceptance(prefs), prefs)
    assert summary.pair_count == 0 and summary.blocked_mu_count == 0


def test_swapped_matching_creates_blocking_pair():
    prefs = profile([[0.9, 0.1], [0.1, 0.9]], [[1.0, 1.0], [1.0, 1.0]], [1, 1])
    swapped = np.array([1, 0])  # each unit placed on its worse type
    summary = count_blocking_pairs(swapped, prefs)
    assert summary.pair_count >= 1
    assert not is_stable(swapped, prefs)


def test_empty_assignment_blocks_on_vacancies():
    prefs = profile([[0.5, 0.3], [0.4, 0.2]], [[1.0, 1.0], [1.0, 1.0]], [1, 1])
    summary = count_blocking_pairs(np.array([-1, -1]), prefs)
    assert summary.blocked_mu_count == 2
    # vacancies attract only units the platform values nonnegatively
    veto = profile([[0.5], [0.4]], [[-1.0], [-0.5]], [1])
    assert count_blocking_pairs(np.array([-1, -1]), veto).pair_count == 0


def test_unassigned_units_use_null_utility_zero():
    # a unit with only negative options never blocks while unassigned
    prefs = profile([[-0.2, -0.4]], [[1.0, 1.0]], [1, 1])
    assert count_blocking_pairs(np.array([-1]), prefs).pair_count == 0


def test_displacement_route_uses_worst_incumbent():
    prefs = profile(
        [[0.9], [0.5], [0.4]],
        [[0.5], [0.1], [0.3]],
        [2],
    )
    # units 1 and 2 hold the two slots; unit 0 beats the worst incumbent
    summary = count_blocking_pairs(np.array([-1, 0, 0]), prefs)
    assert summary.blocked_mu_count == 1 and summary.blocked_mus.tolist() == [0]


def test_max_welfare_single_pair():
    prefs = profile([[0.4]], [[0.6]], [1])
    assignment, value = max_social_welfare(prefs)
    assert assignment.tolist() == [0] and value == pytest.approx(1.0)


def test_max_welfare_all_negative_pairs_stays_empty():
    prefs = profile([[-0.4, -0.1]], [[0.1, -0.2]], [1, 1])
    assignment, value = max_social_welfare(prefs)
    assert assignment.tolist() == [-1] and value == 0.0


def test_max_welfare_equals_enumeration_on_random_instances():
    rng = np.random.default_rng(3)
    for _ in range(40):
        prefs = random_instance(rng, max_mus=5, max_slots=5)
        _, exact = max_social_welfare(prefs)
        _, brute = brute_force_max_welfare(prefs)
        assert exact == pytest.approx(brute, abs=1e-9)


def test_max_welfare_dominates_stable_welfare():
    rng = np.random.default_rng(4)
    for _ in range(40):
        prefs = random_instance(rng)
        da = deferred_acceptance(prefs)
        _, best = max_social_welfare(prefs)
        assert best >= assignment_welfare(da, prefs) - 1e-9


def test_max_welfare_scale_invariant_assignment():
    rng = np.random.default_rng(5)
    prefs = random_instance(rng)
    scaled = profile(prefs.mu_utility * 3.0, prefs.mcsp_utility * 3.0, prefs.counts)
    a1, _ = max_social_welfare(prefs)
    a2, _ = max_social_welfare(scaled)
    assert np.array_equal(a1, a2)


def test_iter_assignments_counts():
    # 2 units, one type with capacity 1: (out,out),(out,in),(in,out) = 3
    assert sum(1 for _ in iter_assignments(np.array([1]), 2)) == 3
    # capacity 2: adds (in,in)
    assert sum(1 for _ in iter_assignments(np.array([2]), 2)) == 4


def test_enumerated_stable_set_contains_da():
    rng = np.random.default_rng(6)
    for _ in range(20):
        prefs = random_instance(rng, max_mus=4, max_slots=4)
        da = deferred_acceptance(prefs)
        stable = enumerate_stable_assignments(prefs)
        assert any(np.array_equal(da, s) for s in stable)
