"""Self-checks of the matching oracles against brute-force enumeration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matching import (
    PreferenceProfile,
    assignment_welfare,
    brute_force_max_welfare,
    count_blocking_pairs,
    deferred_acceptance,
    enumerate_stable_assignments,
    is_stable,
    max_social_welfare,
)

_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_instance(
    rng: np.random.Generator, max_mus: int = 6, max_slots: int = 6
) -> PreferenceProfile:
    """Small synthetic two-sided instance with continuous random utilities.

    Unit utilities are positive, so being matched anywhere beats staying out
    and the null-option convention of the blocking test coincides with the
    proposal order; platform utilities mix signs to exercise its veto.
    """
    n_mus = int(rng.integers(1, max_mus + 1))
    n_types = int(rng.integers(1, min(4, max_slots) + 1))
    counts = np.ones(n_types, dtype=np.int64)
    spare = max_slots - n_types
    for z in range(n_types):
        if spare <= 0:
            break
        extra = int(rng.integers(0, spare + 1))
        counts[z] += extra
        spare -= extra
    return PreferenceProfile(
        mu_utility=rng.uniform(0.05, 1.0, (n_mus, n_types)),
        mcsp_utility=rng.uniform(-1.0, 1.0, (n_mus, n_types)),
        counts=counts,
    )


def _matched_utilities(assignment: np.ndarray, prefs: PreferenceProfile) -> np.ndarray:
    out = np.zeros(assignment.size)
    matched = assignment >= 0
    rows = np.flatnonzero(matched)
    out[rows] = prefs.mu_utility[rows, assignment[rows]]
    return out


def check_oracle_equivalence(
    instances: int = 200, max_mus: int = 6, max_slots: int = 6, seed: int = 1
) -> CheckResult:
    """Deferred acceptance and the exact welfare solver versus enumeration."""
    rng = np.random.default_rng(seed)
    for i in range(instances):
        prefs = random_instance(rng, max_mus=max_mus, max_slots=max_slots)
        da = deferred_acceptance(prefs)
        if not is_stable(da, prefs):
            return CheckResult(
                "oracle-equivalence", False, f"instance {i}: deferred acceptance is unstable"
            )
        stable_set = enumerate_stable_assignments(prefs)
        if not any(np.array_equal(da, s) for s in stable_set):
            return CheckResult(
                "oracle-equivalence", False,
                f"instance {i}: deferred acceptance missing from the enumerated stable set",
            )
        da_util = _matched_utilities(da, prefs)
        for s in stable_set:
            if np.any(da_util < _matched_utilities(s, prefs) - _TOL):
                return CheckResult(
                    "oracle-equivalence", False,
                    f"instance {i}: a stable assignment beats deferred acceptance "
                    "for some unit",
                )
        _, exact = max_social_welfare(prefs)
        _, brute = brute_force_max_welfare(prefs)
        if abs(exact - brute) > _TOL:
            return CheckResult(
                "oracle-equivalence", False,
                f"instance {i}: welfare solver {exact!r} != enumeration {brute!r}",
            )
    return CheckResult(
        "oracle-equivalence", True,
        f"{instances} instances (<= {max_mus} units, <= {max_slots} slots)",
    )


def check_stability_properties(
    instances: int = 200, max_mus: int = 8, max_types: int = 8, seed: int = 2
) -> CheckResult:
    """Deferred acceptance is stable and scale-invariant on random instances."""
    rng = np.random.default_rng(seed)
    for i in range(instances):
        n_mus = int(rng.integers(1, max_mus + 1))
        n_types = int(rng.integers(1, max_types + 1))
        prefs = PreferenceProfile(
            mu_utility=rng.uniform(-1.0, 1.0, (n_mus, n_types)),
            mcsp_utility=rng.uniform(-1.0, 1.0, (n_mus, n_types)),
            counts=rng.integers(1, 4, n_types),
        )
        da = deferred_acceptance(prefs)
        summary = count_blocking_pairs(da, prefs)
        if summary.pair_count != 0:
            return CheckResult(
                "stability", False, f"instance {i}: {summary.pair_count} blocking pairs"
            )
        scaled = PreferenceProfile(
            mu_utility=prefs.mu_utility * 3.7,
            mcsp_utility=prefs.mcsp_utility * 3.7,
            counts=prefs.counts,
        )
        if not np.array_equal(da, deferred_acceptance(scaled)):
            return CheckResult("stability", False, f"instance {i}: not scale invariant")
    return CheckResult("stability", True, f"{instances} instances (<= {max_mus}x{max_types})")


def check_welfare_dominance(instances: int = 200, max_mus: int = 6, seed: int = 3) -> CheckResult:
    """The exact welfare optimum is never below the stable assignment's welfare."""
    rng = np.random.default_rng(seed)
    for i in range(instances):
        prefs = random_instance(rng, max_mus=max_mus)
        da = deferred_acceptance(prefs)
        _, best = max_social_welfare(prefs)
        if best < assignment_welfare(da, prefs) - _TOL:
            return CheckResult("welfare-dominance", False, f"instance {i}: optimum below stable")
    return CheckResult("welfare-dominance", True, f"{instances} instances")


def run_all_checks(small: bool = False) -> list[CheckResult]:
    if small:
        return [
            check_oracle_equivalence(instances=100, max_mus=6, max_slots=6),
            check_stability_properties(instances=100, max_mus=6, max_types=6),
            check_welfare_dominance(instances=100),
        ]
    return [
        check_oracle_equivalence(),
        check_stability_properties(),
        check_welfare_dominance(),
    ]
