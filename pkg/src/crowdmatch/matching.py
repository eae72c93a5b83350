"""Complete-information matching oracles and stability checks.

Assignments here are type-level maps: an int array of length K holding the
assigned type per unit, -1 where unassigned. Unassigned units count as
matched to a null option worth 0 to both sides.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.optimize import linear_sum_assignment

from .world import ExpectationTable

UNASSIGNED = -1


@dataclass(frozen=True)
class PreferenceProfile:
    """Both sides' expected utilities and the per-type capacities.

    Rankings derived from the tables break ties toward the lower index.
    """

    mu_utility: np.ndarray  # (K, Z)
    mcsp_utility: np.ndarray  # (K, Z)
    counts: np.ndarray  # (Z,) capacity per type

    def __post_init__(self) -> None:
        if self.mu_utility.shape != self.mcsp_utility.shape:
            raise ValueError("utility tables must have equal shapes")
        if self.counts.shape != (self.mu_utility.shape[1],):
            raise ValueError("counts must hold one capacity per type")

    @classmethod
    def from_table(cls, table: ExpectationTable, counts: np.ndarray) -> "PreferenceProfile":
        return cls(
            mu_utility=table.mu_utility,
            mcsp_utility=table.mcsp_utility,
            counts=np.asarray(counts, dtype=np.int64),
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.mu_utility.shape

    def mu_ranking(self, k: int) -> np.ndarray:
        """Types ordered from most to least preferred by unit ``k``."""
        return np.argsort(-self.mu_utility[k], kind="stable")

    def mcsp_ranking(self, z: int) -> np.ndarray:
        """Units ordered from most to least preferred for type ``z``."""
        return np.argsort(-self.mcsp_utility[:, z], kind="stable")


def deferred_acceptance(prefs: PreferenceProfile) -> np.ndarray:
    """Unit-proposing deferred acceptance with per-type capacities.

    Units propose down their full preference lists; the platform tentatively
    holds the best units with nonnegative platform utility and may displace
    the worst held one. The result is the unit-optimal stable assignment.
    """
    n_mus, n_types = prefs.shape
    mcsp_rank = np.empty((n_mus, n_types), dtype=np.int64)
    for z in range(n_types):
        mcsp_rank[prefs.mcsp_ranking(z), z] = np.arange(n_mus)
    pref_lists = [[int(z) for z in prefs.mu_ranking(k)] for k in range(n_mus)]
    held: list[list[int]] = [[] for _ in range(n_types)]
    next_choice = [0] * n_mus
    match = np.full(n_mus, UNASSIGNED, dtype=np.int64)
    free = deque(range(n_mus))
    while free:
        k = free.popleft()
        choices = pref_lists[k]
        if next_choice[k] >= len(choices):
            continue  # exhausted, stays unmatched
        z = choices[next_choice[k]]
        next_choice[k] += 1
        if prefs.mcsp_utility[k, z] < 0.0 or prefs.counts[z] == 0:
            free.append(k)
            continue
        if len(held[z]) < prefs.counts[z]:
            held[z].append(k)
            match[k] = z
        else:
            worst = max(held[z], key=lambda u: mcsp_rank[u, z])
            if mcsp_rank[k, z] < mcsp_rank[worst, z]:
                held[z].remove(worst)
                match[worst] = UNASSIGNED
                free.append(worst)
                held[z].append(k)
                match[k] = z
            else:
                free.append(k)
    return match


@dataclass(frozen=True)
class BlockingSummary:
    pair_count: int
    blocked_mu_count: int
    blocked_mus: np.ndarray = field(compare=False, default=None)


def count_blocking_pairs(assignment: np.ndarray, prefs: PreferenceProfile) -> BlockingSummary:
    """Count (unit, type) pairs that would both gain from re-matching.

    A pair (k, z') blocks when the unit strictly gains over its current match
    and the platform would weakly gain: either type z' has spare capacity and
    unit k is worth >= 0 to it, or k is weakly preferred to some currently
    assigned unit of z'.
    """
    mu_u, mcsp_u, counts = prefs.mu_utility, prefs.mcsp_utility, prefs.counts
    n_mus, n_types = mu_u.shape
    assignment = np.asarray(assignment, dtype=np.int64)
    assigned = assignment >= 0
    rows = np.flatnonzero(assigned)
    cols = assignment[rows]
    current = np.zeros(n_mus)
    current[rows] = mu_u[rows, cols]
    n_assigned = np.bincount(cols, minlength=n_types)
    worst_assigned = np.full(n_types, np.inf)
    np.minimum.at(worst_assigned, cols, mcsp_u[rows, cols])
    unit_gains = mu_u > current[:, None]
    displaces = (n_assigned > 0)[None, :] & (mcsp_u >= worst_assigned[None, :])
    fills_vacancy = (n_assigned < counts)[None, :] & (mcsp_u >= 0.0)
    blocking = unit_gains & (displaces | fills_vacancy)
    blocked = blocking.any(axis=1)
    return BlockingSummary(
        pair_count=int(blocking.sum()),
        blocked_mu_count=int(blocked.sum()),
        blocked_mus=np.flatnonzero(blocked),
    )


def is_stable(assignment: np.ndarray, prefs: PreferenceProfile) -> bool:
    """True when the assignment admits no blocking pair."""
    return count_blocking_pairs(assignment, prefs).pair_count == 0


def assignment_welfare(assignment: np.ndarray, prefs: PreferenceProfile) -> float:
    """Expected welfare of a type-level assignment: both sides' utilities summed."""
    total = 0.0
    for k, z in enumerate(np.asarray(assignment)):
        if z >= 0:
            total += float(prefs.mu_utility[k, z] + prefs.mcsp_utility[k, z])
    return total


_BLOCK_DUMMY = 1e12  # keeps each unit's stay-out column private to it


def max_social_welfare(prefs: PreferenceProfile) -> tuple[np.ndarray, float]:
    """Exact welfare-maximizing assignment under the per-type capacities.

    Types are expanded into unit-capacity slots and solved as a rectangular
    assignment problem; every unit also gets a private zero-value stay-out
    slot, so units with no positive-welfare option remain unassigned.
    """
    n_mus, n_types = prefs.shape
    weights = prefs.mu_utility + prefs.mcsp_utility
    slot_types = np.repeat(np.arange(n_types), prefs.counts)
    n_slots = slot_types.size
    cost = np.full((n_mus, n_slots + n_mus), _BLOCK_DUMMY)
    if n_slots:
        cost[:, :n_slots] = -weights[:, slot_types]
    cost[np.arange(n_mus), n_slots + np.arange(n_mus)] = 0.0
    rows, cols = linear_sum_assignment(cost)
    assignment = np.full(n_mus, UNASSIGNED, dtype=np.int64)
    for k, c in zip(rows, cols):
        if c < n_slots and weights[k, slot_types[c]] > 0.0:
            assignment[k] = slot_types[c]
    return assignment, assignment_welfare(assignment, prefs)


def iter_assignments(counts: np.ndarray, n_mus: int) -> Iterator[np.ndarray]:
    """Yield every capacity-respecting type-level assignment (brute force)."""
    counts = np.asarray(counts, dtype=np.int64)
    n_types = counts.size
    current = np.full(n_mus, UNASSIGNED, dtype=np.int64)
    remaining = counts.copy()

    def recurse(k: int) -> Iterator[np.ndarray]:
        if k == n_mus:
            yield current.copy()
            return
        current[k] = UNASSIGNED
        yield from recurse(k + 1)
        for z in range(n_types):
            if remaining[z] > 0:
                remaining[z] -= 1
                current[k] = z
                yield from recurse(k + 1)
                current[k] = UNASSIGNED
                remaining[z] += 1

    yield from recurse(0)


def platform_rational(assignment: np.ndarray, prefs: PreferenceProfile) -> bool:
    """The platform holds no unit it values below leaving the slot open."""
    for k, z in enumerate(np.asarray(assignment)):
        if z >= 0 and prefs.mcsp_utility[k, z] < 0.0:
            return False
    return True


def brute_force_max_welfare(prefs: PreferenceProfile) -> tuple[np.ndarray, float]:
    """Exhaustive welfare maximization; only for small instances."""
    best, best_value = None, -np.inf
    for assignment in iter_assignments(prefs.counts, prefs.shape[0]):
        value = assignment_welfare(assignment, prefs)
        if value > best_value:
            best, best_value = assignment, value
    return best, best_value


def enumerate_stable_assignments(prefs: PreferenceProfile) -> list[np.ndarray]:
    """All platform-rational assignments without blocking pairs (brute force).

    Units rank every type above staying out, mirroring the online market in
    which every unit always offers.
    """
    return [
        a
        for a in iter_assignments(prefs.counts, prefs.shape[0])
        if platform_rational(a, prefs) and is_stable(a, prefs)
    ]
