"""Evaluation quantities: welfare, completion time, energy, regret and bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matching import PreferenceProfile
from .world import ExpectationTable


@dataclass(frozen=True)
class RoundRecord:
    """Realized per-unit outcome of one simulated round.

    Arrays are indexed by unit id; effort entries are NaN where unassigned.
    """

    round: int
    offered_type: np.ndarray  # (K,) int, -1 when no offer was made
    accepted: np.ndarray  # (K,) bool
    is_free: np.ndarray  # (K,) bool, free offers sent this round
    assignment: np.ndarray  # (K,) int type map, -1 unassigned
    met_deadline: np.ndarray  # (K,) bool
    mu_utility: np.ndarray  # (K,)
    mcsp_utility: np.ndarray  # (K,)
    total_time: np.ndarray  # (K,) seconds
    energy: np.ndarray  # (K,) joules
    result_size: np.ndarray  # (K,) megabits


def social_welfare(record: RoundRecord) -> float:
    """Sum of all unit utilities and platform utilities in the round."""
    return float(record.mu_utility.sum() + record.mcsp_utility.sum())


def avg_completion_time(record: RoundRecord) -> float:
    """Mean realized completion time over assigned tasks; NaN when none."""
    assigned = record.assignment >= 0
    if not assigned.any():
        return float("nan")
    return float(record.total_time[assigned].mean())


def energy_efficiency(record: RoundRecord) -> float:
    """Joules spent per megabit of timely result; NaN when nothing was delivered.

    All executed tasks consume energy, but only results that met their
    deadline count as delivered, so missed deadlines show up as waste.
    """
    assigned = record.assignment >= 0
    delivered = assigned & record.met_deadline
    if not delivered.any():
        return float("nan")
    return float(record.energy[assigned].sum() / record.result_size[delivered].sum())


def stable_reference_utilities(stable_assignment: np.ndarray, table: ExpectationTable) -> np.ndarray:
    """(K,) expected utility of each unit under a stable assignment, 0 if unmatched."""
    n_mus = stable_assignment.size
    out = np.zeros(n_mus)
    matched = stable_assignment >= 0
    rows = np.flatnonzero(matched)
    out[rows] = table.mu_utility[rows, stable_assignment[rows]]
    return out


def instantaneous_regret(
    assignment: np.ndarray, table: ExpectationTable, stable_utilities: np.ndarray
) -> np.ndarray:
    """(K,) per-unit gap between the stable-reference and the realized expected utility."""
    n_mus = assignment.size
    realized = np.zeros(n_mus)
    matched = assignment >= 0
    rows = np.flatnonzero(matched)
    realized[rows] = table.mu_utility[rows, assignment[rows]]
    return stable_utilities - realized


def cumulative_regret(instantaneous: np.ndarray) -> np.ndarray:
    """Running prefix sums along the time axis (axis 0)."""
    return np.cumsum(np.asarray(instantaneous, dtype=np.float64), axis=0)


def trailing_mean(series: np.ndarray, window: int = 50) -> np.ndarray:
    """Trailing mean with a growing head window, matching the reporting style."""
    series = np.asarray(series, dtype=np.float64)
    if window <= 1:
        return series.copy()
    out = np.empty_like(series)
    csum = np.cumsum(series)
    for i in range(series.size):
        lo = max(0, i - window + 1)
        total = csum[i] - (csum[lo - 1] if lo > 0 else 0.0)
        out[i] = total / (i - lo + 1)
    return out


@dataclass(frozen=True)
class BoundParams:
    """Inputs of the closed-form learning-loss bounds.

    ``gap_min`` is the smallest expected-utility separation between two types
    for any unit; ``regret_gap`` the largest per-unit loss relative to its
    stable option; ``utility_range`` the spread of expected utilities.
    """

    gap_min: float
    regret_gap: float
    utility_range: float
    repeat_prob: float
    n_types: int
    n_mus: int

    @property
    def rho(self) -> float:
        return (1.0 - self.repeat_prob) * self.repeat_prob ** (self.n_types - 1)

    @classmethod
    def from_table(
        cls,
        table: ExpectationTable,
        stable_utilities: np.ndarray,
        repeat_prob: float,
    ) -> "BoundParams":
        u = table.mu_utility
        n_mus, n_types = u.shape
        if n_types < 2:
            raise ValueError("bounds need at least two task types")
        gaps = np.abs(u[:, :, None] - u[:, None, :])
        off_diag = ~np.eye(n_types, dtype=bool)
        gap_min = float(gaps[:, off_diag].min())
        regret_gap = float((stable_utilities[:, None] - u).max())
        u_lo, u_hi = table.utility_range
        return cls(
            gap_min=gap_min,
            regret_gap=regret_gap,
            utility_range=float(u_hi - u_lo),
            repeat_prob=repeat_prob,
            n_types=n_types,
            n_mus=n_mus,
        )


def _bound_core(params: BoundParams, horizon: int) -> float:
    """Shared inner expression of the two theorem bounds."""
    if params.gap_min <= 0.0:
        raise ValueError("the minimum utility gap must be positive")
    if params.utility_range <= 0.0:
        raise ValueError("the utility range must be positive")
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    z, k = params.n_types, params.n_mus
    exponent = params.gap_min**2 / (z * params.utility_range)
    if exponent >= 1.0:
        raise ValueError("gap^2 / (Z * range) must be < 1 for the bound to apply")
    rho = params.rho
    if rho <= 0.0:
        return math.inf
    log_t = math.log(horizon)
    explore_term = k * (z - 1) / z * (log_t + 1.0)
    tail = math.exp(exponent) / (1.0 - exponent) * horizon ** (1.0 - exponent) + 6.0
    log_mistake_term = (
        math.log(8.0)
        + 5.0 * math.log(z)
        + 2.0 * math.log(k)
        - (z**4 + 1) * math.log(rho)
        + math.log(log_t)
        + math.log(tail)
    )
    try:
        mistake_term = math.exp(log_mistake_term)
    except OverflowError:
        mistake_term = math.inf
    return explore_term + mistake_term


def regret_bound(params: BoundParams, horizon: int) -> float:
    """Closed-form sublinear bound on a unit's cumulative learning loss."""
    return params.regret_gap * _bound_core(params, horizon)


def instability_bound(params: BoundParams, horizon: int) -> float:
    """Bound on the probability that the final round's matching is unstable, clamped to [0, 1]."""
    return min(1.0, _bound_core(params, horizon) / horizon)


def build_preferences(table: ExpectationTable, counts: np.ndarray) -> PreferenceProfile:
    """Preference profile backed by the ground-truth expectation tables."""
    return PreferenceProfile.from_table(table, counts)
