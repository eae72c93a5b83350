"""Named experiment presets reproducing the evaluation figure family at desk scale.

Each preset bundles one or more labeled runs (a strategy plus a scenario
variant). Sweep presets encode the varied parameter in the run label, e.g.
``ca-mab-sfs@lam=0.4``, so the CSV keeps its fixed schema.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import ConfigError, ScenarioConfig

ALL_STRATEGIES = ("ca-mab-sfs", "eps-greedy", "mcsp-strategic", "o-daa", "o-swm")


@dataclass(frozen=True)
class PresetRun:
    label: str
    strategy: str
    config: ScenarioConfig


@dataclass(frozen=True)
class Preset:
    figure_id: str
    description: str
    runs: tuple[PresetRun, ...]


def round_robin_counts(total_tasks: int, n_types: int) -> tuple[int, ...]:
    """Spread ``total_tasks`` over the types as evenly as possible."""
    base, extra = divmod(total_tasks, n_types)
    return tuple(base + (1 if z < extra else 0) for z in range(n_types))


def _scenario(
    n_mus: int,
    n_tasks: int,
    n_types: int,
    *,
    horizon: int,
    replications: int,
    seed: int,
    **overrides,
) -> ScenarioConfig:
    cfg = ScenarioConfig(
        n_mus=n_mus,
        n_types=n_types,
        tasks_per_type=round_robin_counts(n_tasks, n_types),
        horizon=horizon,
        replications=replications,
        master_seed=seed,
        **overrides,
    )
    cfg.validate()
    return cfg


def _timeseries_runs(seed: int, replications: int, horizon: int) -> tuple[PresetRun, ...]:
    # more units than tasks: the regime where coordination pays off
    cfg = _scenario(50, 25, 10, horizon=horizon, replications=replications, seed=seed)
    return tuple(PresetRun(label=s, strategy=s, config=cfg) for s in ALL_STRATEGIES)


def build_preset(
    figure_id: str,
    *,
    rounds: int | None = None,
    replications: int | None = None,
    seed: int | None = None,
) -> Preset:
    """Construct a figure preset, optionally overriding its documented defaults."""
    figure_id = figure_id.lower()
    builders = {
        "fig2": _fig_timeseries,
        "fig3": _fig_timeseries,
        "fig4": _fig_timeseries,
        "fig5": _fig_network_size,
        "fig6": _fig_type_count,
        "fig7": _fig_competition,
        "fig8": _fig_blocking,
        "fig9": _fig_repeat_prob,
        "fig10": _fig_free_offers,
    }
    if figure_id not in builders:
        raise ConfigError(
            f"unknown figure id '{figure_id}'; expected one of {sorted(builders)}"
        )
    return builders[figure_id](figure_id, rounds, replications, seed)


def preset_ids() -> tuple[str, ...]:
    return ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10")


_METRIC_BY_FIGURE = {
    "fig2": "energy_eff_J_per_Mbit",
    "fig3": "avg_completion_time_s",
    "fig4": "social_welfare",
    "fig5": "social_welfare",
    "fig6": "social_welfare",
    "fig7": "acceptance_rate",
    "fig8": "blocked_mu_count",
    "fig9": "social_welfare",
    "fig10": "free_offers_cumulative",
}


def preset_metric(figure_id: str) -> str:
    """The CSV column a figure id is primarily about."""
    return _METRIC_BY_FIGURE[figure_id.lower()]


def _fig_timeseries(figure_id, rounds, replications, seed):
    descriptions = {
        "fig2": "energy per delivered megabit vs round, all strategies, K=50, N=25, Z=10",
        "fig3": "average completion time vs round, all strategies, K=50, N=25, Z=10",
        "fig4": "social welfare vs round, all strategies, K=50, N=25, Z=10",
    }
    return Preset(
        figure_id=figure_id,
        description=descriptions[figure_id],
        runs=_timeseries_runs(seed if seed is not None else 402, replications or 10,
                              rounds or 1000),
    )


def _fig_network_size(figure_id, rounds, replications, seed):
    runs = []
    for n in (10, 25, 50):
        cfg = _scenario(n, n, 10, horizon=rounds or 1000,
                        replications=replications or 10,
                        seed=seed if seed is not None else 405)
        for strategy in ("ca-mab-sfs", "eps-greedy", "o-swm"):
            runs.append(PresetRun(label=f"{strategy}@K=N={n}", strategy=strategy, config=cfg))
    return Preset(figure_id, "social welfare for growing network size K=N, Z=10", tuple(runs))


def _fig_type_count(figure_id, rounds, replications, seed):
    runs = []
    for z in (5, 10, 20):
        cfg = _scenario(50, 50, z, horizon=rounds or 1000,
                        replications=replications or 10,
                        seed=seed if seed is not None else 406)
        for strategy in ("ca-mab-sfs", "eps-greedy", "o-swm"):
            runs.append(PresetRun(label=f"{strategy}@Z={z}", strategy=strategy, config=cfg))
    return Preset(figure_id, "social welfare vs number of task types, K=N=50", tuple(runs))


def _fig_competition(figure_id, rounds, replications, seed):
    runs = []
    for n in (15, 30, 60):
        cfg = _scenario(30, n, 10, horizon=rounds or 1000,
                        replications=replications or 10,
                        seed=seed if seed is not None else 407)
        runs.append(PresetRun(label=f"ca-mab-sfs@N={n}", strategy="ca-mab-sfs", config=cfg))
    return Preset(
        figure_id,
        "unit vs platform utility for varying task supply, K=30 "
        "(per-side utilities are reported in summary.json)",
        tuple(runs),
    )


def _fig_blocking(figure_id, rounds, replications, seed):
    cfg = _scenario(10, 10, 10, horizon=rounds or 1000,
                    replications=replications or 100,
                    seed=seed if seed is not None else 408)
    strategies = ("ca-mab-sfs", "eps-greedy", "mcsp-strategic", "o-daa")
    return Preset(
        figure_id,
        "blocked units vs round, K=10, N=10, Z=10",
        tuple(PresetRun(label=s, strategy=s, config=cfg) for s in strategies),
    )


def _fig_repeat_prob(figure_id, rounds, replications, seed):
    runs = []
    for lam in (0.0, 0.1, 0.4):
        cfg = _scenario(10, 10, 10, horizon=rounds or 1000,
                        replications=replications or 40,
                        seed=seed if seed is not None else 409,
                        repeat_prob=lam)
        runs.append(
            PresetRun(label=f"ca-mab-sfs@lam={lam}", strategy="ca-mab-sfs", config=cfg)
        )
    return Preset(figure_id, "social welfare for varying offer-repeat probability",
                  tuple(runs))


def _fig_free_offers(figure_id, rounds, replications, seed):
    runs = []
    for eps_a in (0.25, 0.5, 1.0):
        cfg = _scenario(10, 10, 10, horizon=rounds or 200,
                        replications=replications or 20,
                        seed=seed if seed is not None else 410,
                        free_threshold=eps_a)
        runs.append(
            PresetRun(label=f"ca-mab-sfs@eps_a={eps_a}", strategy="ca-mab-sfs", config=cfg)
        )
    return Preset(figure_id, "cumulative free offers for varying free-offer thresholds",
                  tuple(runs))
