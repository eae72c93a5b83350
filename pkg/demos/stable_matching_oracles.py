"""Tour of the matching oracles on a toy instance you can check by hand."""
import numpy as np

from crowdmatch.matching import (
    PreferenceProfile,
    assignment_welfare,
    brute_force_max_welfare,
    count_blocking_pairs,
    deferred_acceptance,
    enumerate_stable_assignments,
    max_social_welfare,
)

# Three units, two types with one slot each. Unit utilities (rows) and
# platform utilities per (unit, type):
prefs = PreferenceProfile(
    mu_utility=np.array([[0.9, 0.4], [0.8, 0.7], [0.2, 0.6]]),
    mcsp_utility=np.array([[0.5, 0.6], [0.9, 0.2], [0.4, 0.8]]),
    counts=np.array([1, 1]),
)

match = deferred_acceptance(prefs)
print("deferred acceptance:", match, "(type per unit, -1 = unmatched)")
print("blocking pairs:", count_blocking_pairs(match, prefs))
print("welfare of the stable assignment:", round(assignment_welfare(match, prefs), 3))

best, value = max_social_welfare(prefs)
print("welfare-max assignment:", best, "value", round(value, 3))
_, brute = brute_force_max_welfare(prefs)
print("exhaustive optimum agrees:", np.isclose(value, brute))

stable_set = enumerate_stable_assignments(prefs)
print(f"{len(stable_set)} stable assignment(s) by enumeration:")
for s in stable_set:
    print("   ", s, "welfare", round(assignment_welfare(s, prefs), 3))

# A deliberately bad matching: both matched units would rather swap and the
# platform agrees for at least one of them.
bad = np.array([1, 0, -1])
print("swapped matching blocking summary:", count_blocking_pairs(bad, prefs))
