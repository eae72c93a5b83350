"""Round-loop simulator and Monte-Carlo campaign driver.

Each round runs the four market phases: publish, offers, clearing, execution
with payment. Random streams are split per (replication, role, unit) from the
master seed, so environment draws do not depend on the strategy under test
and paired comparisons across strategies are meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agents import CollisionAvoidingAgent, EpsilonGreedyAgent, RandomTypeAgent
from .config import ScenarioConfig
from .matching import (
    PreferenceProfile,
    count_blocking_pairs,
    deferred_acceptance,
    assignment_welfare,
    max_social_welfare,
)
from .mcsp import AssignedPair, Assignment, allocate, publish
from .metrics import (
    BoundParams,
    RoundRecord,
    avg_completion_time,
    energy_efficiency,
    instantaneous_regret,
    instability_bound,
    regret_bound,
    social_welfare,
    stable_reference_utilities,
)
from .model import cost, mcsp_utility, mu_utility, payment, sample_effort
from .world import ExpectationTable, World, build_world, ground_truth_expectations

LEARNING_STRATEGIES = ("ca-mab-sfs", "eps-greedy", "mcsp-strategic")
ORACLE_STRATEGIES = ("o-daa", "o-swm")
STRATEGIES = LEARNING_STRATEGIES + ORACLE_STRATEGIES

# spawn-key roles for the per-replication random streams
_WORLD, _GROUND_TRUTH, _ENVIRONMENT, _AGENT, _EFFORT = range(5)


def _rng(master_seed: int, replication: int, *key: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(replication, *key))
    return np.random.default_rng(seq)


@dataclass(frozen=True)
class Realization:
    """One replication's world plus everything derived from complete information."""

    replication: int
    world: World
    table: ExpectationTable
    prefs: PreferenceProfile
    stable_assignment: np.ndarray  # unit-optimal stable map (K,)
    stable_utilities: np.ndarray  # (K,) expected utility at the stable map
    stable_welfare: float
    oswm_assignment: np.ndarray
    oracle_welfare: float  # expected welfare of the exact optimum
    bound_params: BoundParams | None
    bound_error: str | None


def realize(config: ScenarioConfig, replication: int) -> Realization:
    """Draw the world for one replication and precompute the oracle side."""
    world = build_world(config, _rng(config.master_seed, replication, _WORLD))
    table = ground_truth_expectations(
        world, config.gt_samples, _rng(config.master_seed, replication, _GROUND_TRUTH)
    )
    prefs = PreferenceProfile.from_table(table, world.counts)
    stable = deferred_acceptance(prefs)
    stable_utilities = stable_reference_utilities(stable, table)
    oswm, oracle_welfare = max_social_welfare(prefs)
    bound_params, bound_error = None, None
    try:
        bound_params = BoundParams.from_table(table, stable_utilities, config.repeat_prob)
    except ValueError as exc:
        bound_error = str(exc)
    return Realization(
        replication=replication,
        world=world,
        table=table,
        prefs=prefs,
        stable_assignment=stable,
        stable_utilities=stable_utilities,
        stable_welfare=assignment_welfare(stable, prefs),
        oswm_assignment=oswm,
        oracle_welfare=oracle_welfare,
        bound_params=bound_params,
        bound_error=bound_error,
    )


@dataclass(frozen=True)
class MetricsSeries:
    """Per-round metric series of one (strategy, replication) run."""

    strategy: str
    replication: int
    social_welfare: np.ndarray
    avg_completion_time_s: np.ndarray
    energy_eff_j_per_mbit: np.ndarray
    blocked_mu_count: np.ndarray
    mean_cumulative_regret: np.ndarray
    free_offers_cumulative: np.ndarray
    acceptance_rate: np.ndarray
    mean_mu_utility: np.ndarray
    mean_mcsp_utility: np.ndarray
    final_regret_per_mu: np.ndarray  # (K,) cumulative regret at the horizon
    oracle_welfare: float
    stable_welfare: float
    regret_bound_value: float | None
    instability_bound_value: float | None

    @property
    def horizon(self) -> int:
        return self.social_welfare.size


CSV_COLUMNS = (
    "strategy",
    "replication",
    "round",
    "social_welfare",
    "avg_completion_time_s",
    "energy_eff_J_per_Mbit",
    "blocked_mu_count",
    "mean_cumulative_regret",
    "free_offers_cumulative",
    "acceptance_rate",
)


def _build_agents(strategy: str, world: World, config: ScenarioConfig, replication: int):
    kwargs = dict(
        pay_time_rate=config.pay_time_rate,
        pay_energy_rate=config.pay_energy_rate,
        pay_factor=config.pay_factor,
    )
    warmup, scale = config.exploration_warmup, config.exploration_scale

    def warm_exploration(t: int) -> float:
        # the learner explores fully through its free-offer phase, during
        # which acceptance is guaranteed, then decays
        if t <= warmup:
            return 1.0
        return min(1.0, scale / (t - warmup))

    def plain_exploration(t: int) -> float:
        return min(1.0, scale / t)

    agents = []
    for k in range(world.n_mus):
        rng = _rng(config.master_seed, replication, _AGENT, k)
        if strategy == "ca-mab-sfs":
            agent = CollisionAvoidingAgent(
                k, world.n_types, rng,
                repeat_prob=config.repeat_prob,
                free_threshold=config.free_threshold,
                free_phase_end=config.free_phase_end,
                exploration=warm_exploration,
                **kwargs,
            )
        elif strategy == "eps-greedy":
            agent = EpsilonGreedyAgent(
                k, world.n_types, rng, exploration=plain_exploration, **kwargs
            )
        elif strategy == "mcsp-strategic":
            agent = RandomTypeAgent(
                k, world.n_types, rng, exploration=plain_exploration, **kwargs
            )
        else:
            raise ValueError(f"unknown learning strategy '{strategy}'")
        agents.append(agent)
    return agents


def _replay_assignment(board, replay_map: np.ndarray, round_index: int) -> Assignment:
    """Apply a fixed unit-to-type map to this round's published tasks."""
    cursor = [0] * len(board.tasks_by_type)
    pairs = []
    for k, z in enumerate(replay_map):
        if z < 0:
            continue
        task = board.tasks_by_type[z][cursor[z]]
        cursor[z] += 1
        pairs.append(AssignedPair(mu_id=k, task_id=task.task_id, type_id=int(z),
                                  proposal=0.0, is_free=False))
    return Assignment(round=round_index, pairs=tuple(pairs))


def run_on_realization(
    realization: Realization, strategy: str, *, label: str | None = None
) -> MetricsSeries:
    """Simulate one strategy on an already-realized world."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy '{strategy}'; expected one of {STRATEGIES}")
    world = realization.world
    config = world.config
    replication = realization.replication
    n_mus, horizon = world.n_mus, config.horizon
    env_rng = _rng(config.master_seed, replication, _ENVIRONMENT)
    effort_rngs = [
        _rng(config.master_seed, replication, _EFFORT, k) for k in range(n_mus)
    ]
    oracle = strategy in ORACLE_STRATEGIES
    if oracle:
        agents = None
        replay_map = (
            realization.stable_assignment if strategy == "o-daa"
            else realization.oswm_assignment
        )
    else:
        agents = _build_agents(strategy, world, config, replication)
        replay_map = None

    series = {
        name: np.zeros(horizon)
        for name in (
            "social_welfare", "avg_completion_time_s", "energy_eff_j_per_mbit",
            "mean_cumulative_regret", "acceptance_rate", "mean_mu_utility",
            "mean_mcsp_utility",
        )
    }
    blocked = np.zeros(horizon, dtype=np.int64)
    free_cumulative = np.zeros(horizon, dtype=np.int64)
    running_regret = np.zeros(n_mus)
    free_total = 0
    prev_assignment = None

    for t in range(1, horizon + 1):
        board = publish(
            world.task_types, prev_assignment, t, env_rng, size_rel_std=config.size_rel_std
        )
        tasks_flat = [task for group in board.tasks_by_type for task in group]
        offered_type = np.full(n_mus, -1, dtype=np.int64)
        is_free = np.zeros(n_mus, dtype=bool)
        if oracle:
            assignment = _replay_assignment(board, replay_map, t)
            responses = None
            offered_type[:] = replay_map
            n_offers = int((replay_map >= 0).sum())
        else:
            offers = [agent.make_offer(board, t) for agent in agents]
            assignment, responses = allocate(board, offers, world.earnings)
            for offer in offers:
                offered_type[offer.mu_id] = offer.type_id
                is_free[offer.mu_id] = offer.is_free
            n_offers = len(offers)

        accepted = np.zeros(n_mus, dtype=bool)
        met = np.zeros(n_mus, dtype=bool)
        type_map = np.full(n_mus, -1, dtype=np.int64)
        util_mu = np.zeros(n_mus)
        util_mcsp = np.zeros(n_mus)
        total_time = np.full(n_mus, np.nan)
        energy = np.full(n_mus, np.nan)
        result_size = np.full(n_mus, np.nan)
        observations = {}
        for pair in assignment.pairs:
            k = pair.mu_id
            mu = world.mu_profiles[k]
            ttype = world.task_types[pair.type_id]
            task = tasks_flat[pair.task_id]
            effort = sample_effort(
                mu, ttype, task, effort_rngs[k],
                sense_std=config.sense_time_std_s,
                cpu_std=config.cpu_freq_std_hz,
                comm_std=config.comm_time_std_s_per_mbit,
            )
            effort_cost = cost(mu, effort)
            if not oracle and config.pay_mode == "proposal":
                pay = pair.proposal
            elif not oracle and pair.is_free:
                pay = 0.0
            else:
                pay = payment(
                    effort,
                    time_rate=config.pay_time_rate,
                    energy_rate=config.pay_energy_rate,
                    factor=config.pay_factor,
                )
            u = mu_utility(pay, effort, effort_cost)
            accepted[k] = True
            met[k] = effort.met_deadline
            type_map[k] = pair.type_id
            util_mu[k] = u
            util_mcsp[k] = mcsp_utility(ttype.earning, pay, effort)
            total_time[k] = effort.t_total
            energy[k] = effort.energy
            result_size[k] = task.result_size
            observations[k] = (u, effort)

        if agents is not None:
            for agent in agents:
                agent.observe(responses[agent.mu_id], observations.get(agent.mu_id), t)

        record = RoundRecord(
            round=t,
            offered_type=offered_type,
            accepted=accepted,
            is_free=is_free,
            assignment=type_map,
            met_deadline=met,
            mu_utility=util_mu,
            mcsp_utility=util_mcsp,
            total_time=total_time,
            energy=energy,
            result_size=result_size,
        )
        i = t - 1
        series["social_welfare"][i] = social_welfare(record)
        series["avg_completion_time_s"][i] = avg_completion_time(record)
        series["energy_eff_j_per_mbit"][i] = energy_efficiency(record)
        series["mean_mu_utility"][i] = util_mu.sum() / n_mus
        series["mean_mcsp_utility"][i] = util_mcsp.sum() / n_mus
        series["acceptance_rate"][i] = accepted.sum() / max(1, n_offers)
        blocked[i] = count_blocking_pairs(type_map, realization.prefs).blocked_mu_count
        running_regret += instantaneous_regret(
            type_map, realization.table, realization.stable_utilities
        )
        series["mean_cumulative_regret"][i] = running_regret.mean()
        free_total += int(is_free.sum())
        free_cumulative[i] = free_total
        prev_assignment = assignment

    bound_r = bound_i = None
    if realization.bound_params is not None and horizon >= 2:
        try:
            bound_r = regret_bound(realization.bound_params, horizon)
            bound_i = instability_bound(realization.bound_params, horizon)
        except ValueError:
            pass
    return MetricsSeries(
        strategy=label or strategy,
        replication=replication,
        social_welfare=series["social_welfare"],
        avg_completion_time_s=series["avg_completion_time_s"],
        energy_eff_j_per_mbit=series["energy_eff_j_per_mbit"],
        blocked_mu_count=blocked,
        mean_cumulative_regret=series["mean_cumulative_regret"],
        free_offers_cumulative=free_cumulative,
        acceptance_rate=series["acceptance_rate"],
        mean_mu_utility=series["mean_mu_utility"],
        mean_mcsp_utility=series["mean_mcsp_utility"],
        final_regret_per_mu=running_regret.copy(),
        oracle_welfare=realization.oracle_welfare,
        stable_welfare=realization.stable_welfare,
        regret_bound_value=bound_r,
        instability_bound_value=bound_i,
    )


def run(
    config: ScenarioConfig, strategy: str, replication: int = 0, *, label: str | None = None
) -> MetricsSeries:
    """Simulate one strategy for one replication of the scenario."""
    config.validate()
    return run_on_realization(realize(config, replication), strategy, label=label)


@dataclass(frozen=True)
class CampaignResult:
    """All runs of a campaign plus the per-replication oracle values."""

    config: ScenarioConfig
    series: tuple[MetricsSeries, ...]
    realizations: tuple[Realization, ...]

    def by_strategy(self, strategy: str) -> list[MetricsSeries]:
        return [s for s in self.series if s.strategy == strategy]

    def stack(self, strategy: str, attr: str) -> np.ndarray:
        """(R, T) array of one metric across replications."""
        return np.stack([getattr(s, attr) for s in self.by_strategy(strategy)])

    def mean_series(self, strategy: str, attr: str) -> np.ndarray:
        return self.stack(strategy, attr).mean(axis=0)

    def std_series(self, strategy: str, attr: str) -> np.ndarray:
        return self.stack(strategy, attr).std(axis=0)


def run_campaign(
    config: ScenarioConfig,
    strategies: tuple[str, ...] | list[str],
    replications: int | None = None,
) -> CampaignResult:
    """Run several strategies over shared per-replication worlds."""
    config.validate()
    for strategy in strategies:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy '{strategy}'; expected one of {STRATEGIES}")
    n_reps = config.replications if replications is None else replications
    all_series = []
    realizations = []
    for rep in range(n_reps):
        realization = realize(config, rep)
        realizations.append(realization)
        for strategy in strategies:
            all_series.append(run_on_realization(realization, strategy))
    return CampaignResult(
        config=config, series=tuple(all_series), realizations=tuple(realizations)
    )
