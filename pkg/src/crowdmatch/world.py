"""Per-replication scenario realization and ground-truth expectation tables.

A :class:`World` is one concrete draw of the static unit and task-type
characteristics. The expectation tables computed here are the complete
information used by the offline oracles and the metrics; learning agents
never see them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .model import MEGABIT, MuProfile, TaskType, positive_normal_array


@dataclass(frozen=True)
class World:
    """One realized scenario: concrete task types, unit profiles and deadlines."""

    config: ScenarioConfig
    task_types: tuple[TaskType, ...]
    mu_profiles: tuple[MuProfile, ...]
    # flat array views used by the vectorized samplers and oracles
    sizes: np.ndarray  # (Z,) mean result sizes, megabits
    complexity: np.ndarray  # (Z,) cycles per bit
    deadlines: np.ndarray  # (Z,) seconds
    earnings: np.ndarray  # (Z,)
    counts: np.ndarray  # (Z,) tasks per round
    sense_means: np.ndarray  # (K, Z) seconds
    comm_means: np.ndarray  # (K, Z) seconds per megabit
    cpu_means: np.ndarray  # (K,) Hz
    cost_time: np.ndarray  # (K,)
    cost_energy: np.ndarray  # (K,)

    @property
    def n_mus(self) -> int:
        return len(self.mu_profiles)

    @property
    def n_types(self) -> int:
        return len(self.task_types)

    @property
    def total_tasks(self) -> int:
        return int(self.counts.sum())


def expected_total_time(
    sense_means: np.ndarray,
    comm_means: np.ndarray,
    cpu_means: np.ndarray,
    sizes: np.ndarray,
    complexity: np.ndarray,
) -> np.ndarray:
    """(K, Z) completion time of each unit on each type, at the static means."""
    t_comp = complexity[None, :] * sizes[None, :] * MEGABIT / cpu_means[:, None]
    t_comm = comm_means * sizes[None, :]
    return sense_means + t_comp + t_comm


def _draw_time_costs(config: ScenarioConfig, rng: np.random.Generator, k: int) -> np.ndarray:
    """Per-unit time valuations, excluding the knife edge around the paid rate.

    A unit whose own time cost nearly equals the paid rate is indifferent
    between all task types; such units are redrawn.
    """
    paid = config.pay_factor * config.pay_time_rate
    band = config.cost_time_band
    out = rng.uniform(config.cost_time_min, config.cost_time_max, k)
    if band > 0.0:
        lo, hi = paid - band, paid + band
        if config.cost_time_min < hi and config.cost_time_max > lo:
            for _ in range(100):
                inside = (out > lo) & (out < hi)
                if not inside.any():
                    break
                out[inside] = rng.uniform(
                    config.cost_time_min, config.cost_time_max, int(inside.sum())
                )
            out = np.where((out > lo) & (out < hi), lo, out)
    return out


def build_world(config: ScenarioConfig, rng: np.random.Generator) -> World:
    """Draw the static scenario characteristics for one replication."""
    config.validate()
    k, z = config.n_mus, config.n_types
    sizes = rng.uniform(config.size_min_mbit, config.size_max_mbit, z)
    complexity = rng.uniform(config.complexity_min, config.complexity_max, z)
    if config.tasks_per_type is not None:
        counts = np.asarray(config.tasks_per_type, dtype=np.int64)
    else:
        counts = rng.integers(config.tasks_per_type_min, config.tasks_per_type_max + 1, z)
    earnings = config.earning_base + config.earning_per_mbit * sizes
    sense_means = rng.uniform(config.sense_time_min_s, config.sense_time_max_s, (k, z))
    comm_means = rng.uniform(
        config.comm_time_min_s_per_mbit, config.comm_time_max_s_per_mbit, (k, z)
    )
    cpu_means = rng.uniform(config.cpu_freq_min_hz, config.cpu_freq_max_hz, k)
    cost_time = _draw_time_costs(config, rng, k)
    cost_energy = rng.uniform(config.cost_energy_min, config.cost_energy_max, k)
    if config.deadlines_s is not None:
        deadlines = np.asarray(config.deadlines_s, dtype=np.float64)
    else:
        mean_total = expected_total_time(sense_means, comm_means, cpu_means, sizes, complexity)
        deadlines = config.deadline_slack * mean_total.mean(axis=0)
    task_types = tuple(
        TaskType(
            id=i,
            mean_result_size=float(sizes[i]),
            complexity=float(complexity[i]),
            deadline=float(deadlines[i]),
            earning=float(earnings[i]),
            count_per_round=int(counts[i]),
        )
        for i in range(z)
    )
    mu_profiles = tuple(
        MuProfile(
            id=i,
            cpu_freq_mean=float(cpu_means[i]),
            power_comm=config.power_comm_w,
            power_comp=config.power_comp_w,
            cost_time=float(cost_time[i]),
            cost_energy=float(cost_energy[i]),
            mean_sense_time=sense_means[i],
            mean_comm_time=comm_means[i],
        )
        for i in range(k)
    )
    return World(
        config=config,
        task_types=task_types,
        mu_profiles=mu_profiles,
        sizes=sizes,
        complexity=complexity,
        deadlines=deadlines,
        earnings=earnings,
        counts=counts,
        sense_means=sense_means,
        comm_means=comm_means,
        cpu_means=cpu_means,
        cost_time=cost_time,
        cost_energy=cost_energy,
    )


@dataclass(frozen=True)
class ExpectationTable:
    """Monte-Carlo estimates of the per-(unit, type) expected quantities."""

    mu_utility: np.ndarray  # (K, Z) expected unit utility
    mcsp_utility: np.ndarray  # (K, Z) expected platform utility
    p_met: np.ndarray  # (K, Z) deadline-hit probability
    mean_time: np.ndarray  # (K, Z) expected completion time, seconds
    mean_energy: np.ndarray  # (K, Z) expected energy, joules
    mean_cost: np.ndarray  # (K, Z) expected unit cost
    se_mu_utility: np.ndarray  # (K, Z) standard error of mu_utility
    se_mcsp_utility: np.ndarray  # (K, Z)
    samples: int

    @property
    def utility_range(self) -> tuple[float, float]:
        return float(self.mu_utility.min()), float(self.mu_utility.max())


def ground_truth_expectations(
    world: World, samples: int, rng: np.random.Generator
) -> ExpectationTable:
    """Estimate the expectation tables by Monte Carlo, one type at a time.

    Deterministic for a given generator state. Effort-based payments are
    assumed, matching the default market rule.
    """
    cfg = world.config
    k, z_count = world.n_mus, world.n_types
    shape = (k, z_count)
    out = {
        name: np.empty(shape)
        for name in (
            "mu_utility", "mcsp_utility", "p_met", "mean_time", "mean_energy",
            "mean_cost", "se_mu_utility", "se_mcsp_utility",
        )
    }
    sqrt_n = np.sqrt(samples)
    for z in range(z_count):
        size = positive_normal_array(
            rng, world.sizes[z], cfg.size_rel_std * world.sizes[z], (samples,)
        )
        t_sense = positive_normal_array(
            rng, world.sense_means[:, z], cfg.sense_time_std_s, (samples, k)
        )
        freq = positive_normal_array(rng, world.cpu_means, cfg.cpu_freq_std_hz, (samples, k))
        per_mbit = positive_normal_array(
            rng, world.comm_means[:, z], cfg.comm_time_std_s_per_mbit, (samples, k)
        )
        t_comp = world.complexity[z] * size[:, None] * MEGABIT / freq
        t_comm = per_mbit * size[:, None]
        t_total = t_sense + t_comp + t_comm
        energy = cfg.power_comm_w * t_comm + cfg.power_comp_w * t_comp
        met = t_total <= world.deadlines[z]
        effort_cost = world.cost_time[None, :] * t_total + world.cost_energy[None, :] * energy
        pay = cfg.pay_factor * (cfg.pay_time_rate * t_total + cfg.pay_energy_rate * energy)
        u_mu = np.where(met, pay, 0.0) - effort_cost
        u_mcsp = np.where(met, world.earnings[z] - pay, 0.0)
        out["mu_utility"][:, z] = u_mu.mean(axis=0)
        out["mcsp_utility"][:, z] = u_mcsp.mean(axis=0)
        out["p_met"][:, z] = met.mean(axis=0)
        out["mean_time"][:, z] = t_total.mean(axis=0)
        out["mean_energy"][:, z] = energy.mean(axis=0)
        out["mean_cost"][:, z] = effort_cost.mean(axis=0)
        out["se_mu_utility"][:, z] = u_mu.std(axis=0) / sqrt_n
        out["se_mcsp_utility"][:, z] = u_mcsp.std(axis=0) / sqrt_n
    return ExpectationTable(samples=samples, **out)
