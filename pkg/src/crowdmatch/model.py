"""Core domain types and the closed-form effort, cost, payment and utility math.

Units throughout the package: seconds, joules, watts, hertz, megabits and
monetary units. Result sizes are megabits; CPU complexity is cycles per bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MEGABIT = 1e6  # bits per megabit


@dataclass(frozen=True)
class TaskType:
    """Static parameters shared by all tasks of one type."""

    id: int
    mean_result_size: float  # megabits
    complexity: float  # CPU cycles per bit of the result
    deadline: float  # seconds
    earning: float  # monetary units the platform earns per timely completion
    count_per_round: int  # tasks of this type published each round

    def __post_init__(self) -> None:
        if min(self.mean_result_size, self.complexity, self.deadline) <= 0.0:
            raise ValueError("task type parameters must be strictly positive")
        if self.count_per_round < 1:
            raise ValueError("count_per_round must be >= 1")


@dataclass(frozen=True)
class TaskInstance:
    """One published task: a concrete draw around its type's mean size."""

    task_id: int
    type_id: int
    result_size: float  # megabits
    round: int


@dataclass(frozen=True)
class MuProfile:
    """Static characteristics of one mobile unit.

    ``mean_sense_time`` and ``mean_comm_time`` are per-type vectors of length
    Z; the latter is seconds per megabit of result transmitted.
    """

    id: int
    cpu_freq_mean: float  # Hz
    power_comm: float  # W
    power_comp: float  # W
    cost_time: float  # monetary units per second
    cost_energy: float  # monetary units per joule
    mean_sense_time: np.ndarray  # (Z,) seconds
    mean_comm_time: np.ndarray  # (Z,) seconds per megabit

    def __post_init__(self) -> None:
        if min(self.cpu_freq_mean, self.power_comm, self.power_comp) <= 0.0:
            raise ValueError("mobile unit physical parameters must be positive")
        if min(self.cost_time, self.cost_energy) <= 0.0:
            raise ValueError("cost coefficients must be positive")
        if np.any(self.mean_sense_time <= 0.0) or np.any(self.mean_comm_time <= 0.0):
            raise ValueError("per-type time means must be positive")
        if self.mean_sense_time.shape != self.mean_comm_time.shape:
            raise ValueError("per-type vectors must have equal length")


@dataclass(frozen=True)
class EffortSample:
    """Realized effort of one task execution."""

    t_sense: float
    t_comp: float
    t_comm: float
    t_total: float
    energy: float
    met_deadline: bool


_CLAMP_ATTEMPTS = 100


def positive_normal(rng: np.random.Generator, mean: float, std: float) -> float:
    """Normal draw resampled until positive; clamped to 1e-6*mean as last resort."""
    if std == 0.0:
        return float(mean)
    for _ in range(_CLAMP_ATTEMPTS):
        x = rng.normal(mean, std)
        if x > 0.0:
            return float(x)
    return float(1e-6 * mean)


def positive_normal_array(
    rng: np.random.Generator, mean: np.ndarray | float, std: float, size: tuple[int, ...]
) -> np.ndarray:
    """Vectorized counterpart of :func:`positive_normal`."""
    mean_arr = np.broadcast_to(np.asarray(mean, dtype=np.float64), size)
    if std == 0.0:
        return mean_arr.copy()
    x = rng.normal(mean_arr, std)
    for _ in range(_CLAMP_ATTEMPTS):
        bad = x <= 0.0
        if not bad.any():
            return x
        x[bad] = rng.normal(mean_arr[bad], std)
    bad = x <= 0.0
    x[bad] = 1e-6 * mean_arr[bad]
    return x


def sample_task_instance(
    ttype: TaskType,
    task_id: int,
    round_index: int,
    rng: np.random.Generator,
    *,
    size_rel_std: float = 0.05,
) -> TaskInstance:
    """Draw one task of the given type; sizes vary around the type mean."""
    size = positive_normal(rng, ttype.mean_result_size, size_rel_std * ttype.mean_result_size)
    return TaskInstance(task_id=task_id, type_id=ttype.id, result_size=size, round=round_index)


def sample_effort(
    mu: MuProfile,
    ttype: TaskType,
    task: TaskInstance,
    rng: np.random.Generator,
    *,
    sense_std: float = 10.0,
    cpu_std: float = 1e8,
    comm_std: float = 0.01,
) -> EffortSample:
    """Realize the effort of ``mu`` executing ``task``.

    Sensing time, the slot's CPU frequency and the per-megabit transmission
    time are independent positive-truncated normal draws around the unit's
    means; computation time is complexity * size / frequency.
    """
    if task.type_id != ttype.id:
        raise ValueError("task does not belong to the given type")
    z = ttype.id
    t_sense = positive_normal(rng, float(mu.mean_sense_time[z]), sense_std)
    freq = positive_normal(rng, mu.cpu_freq_mean, cpu_std)
    t_comp = ttype.complexity * task.result_size * MEGABIT / freq
    per_mbit = positive_normal(rng, float(mu.mean_comm_time[z]), comm_std)
    t_comm = per_mbit * task.result_size
    t_total = t_sense + t_comp + t_comm
    energy = mu.power_comm * t_comm + mu.power_comp * t_comp
    return EffortSample(
        t_sense=t_sense,
        t_comp=t_comp,
        t_comm=t_comm,
        t_total=t_total,
        energy=energy,
        met_deadline=t_total <= ttype.deadline,
    )


def cost(mu: MuProfile, effort: EffortSample) -> float:
    """Monetary cost of an executed task: time and energy weighted by the unit's coefficients."""
    return mu.cost_time * effort.t_total + mu.cost_energy * effort.energy


def effort_price(
    t_total: float,
    energy: float,
    *,
    time_rate: float = 0.01,
    energy_rate: float = 0.004,
    factor: float = 1.1,
) -> float:
    """The platform's public rate card: what a given effort is paid.

    The rates are platform-wide; a unit whose private time or energy valuation
    exceeds them loses money on long or power-hungry tasks, which is what
    differentiates the units' preferences.
    """
    return factor * (time_rate * t_total + energy_rate * energy)


def payment(
    effort: EffortSample,
    *,
    time_rate: float = 0.01,
    energy_rate: float = 0.004,
    factor: float = 1.1,
) -> float:
    """Effort-based payment of a realized execution, per the public rate card."""
    return effort_price(
        effort.t_total, effort.energy,
        time_rate=time_rate, energy_rate=energy_rate, factor=factor,
    )


def mu_utility(pay: float, effort: EffortSample, effort_cost: float) -> float:
    """Unit's realized utility: payment only on timely completion, cost always."""
    return (pay if effort.met_deadline else 0.0) - effort_cost


def mcsp_utility(earning: float, pay: float, effort: EffortSample) -> float:
    """Platform's realized utility: margin over the payment, zero on a missed deadline."""
    return (earning - pay) if effort.met_deadline else 0.0
