"""Figure definitions for the evaluation figure family.

Each spec names the metrics.csv column it plots, the axis texture and the
trailing-mean smoothing window stated in the caption. Specs never recompute
metrics; they only average replications and smooth.
"""
from __future__ import annotations

from dataclasses import dataclass

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

DEFAULT_WINDOW = 50


@dataclass(frozen=True)
class FigureSpec:
    """One renderable figure: a CSV column grouped by the strategy label."""

    figure_id: str
    metric: str  # metrics.csv column
    ylabel: str
    title: str
    smoothing_window: int = DEFAULT_WINDOW

    def __post_init__(self) -> None:
        if self.metric not in CSV_COLUMNS:
            raise ValueError(f"unknown metrics.csv column '{self.metric}'")
        if self.smoothing_window < 1:
            raise ValueError("smoothing_window must be >= 1")


FIGURES = {
    "fig2": FigureSpec(
        "fig2", "energy_eff_J_per_Mbit", "energy per delivered megabit [J/Mbit]",
        "Energy efficiency over rounds",
    ),
    "fig3": FigureSpec(
        "fig3", "avg_completion_time_s", "average completion time [s]",
        "Task completion time over rounds",
    ),
    "fig4": FigureSpec(
        "fig4", "social_welfare", "social welfare [monetary units]",
        "Social welfare over rounds",
    ),
    "fig5": FigureSpec(
        "fig5", "social_welfare", "social welfare [monetary units]",
        "Social welfare for growing network size",
    ),
    "fig6": FigureSpec(
        "fig6", "social_welfare", "social welfare [monetary units]",
        "Social welfare for varying type counts",
    ),
    "fig7": FigureSpec(
        "fig7", "acceptance_rate", "accepted offers / offers",
        "Offer acceptance under varying task supply",
    ),
    "fig8": FigureSpec(
        "fig8", "blocked_mu_count", "units in a blocking pair",
        "Blocked units over rounds", smoothing_window=10,
    ),
    "fig9": FigureSpec(
        "fig9", "social_welfare", "social welfare [monetary units]",
        "Welfare for varying offer-repeat probabilities",
    ),
    "fig10": FigureSpec(
        "fig10", "free_offers_cumulative", "cumulative free offers",
        "Free offers over rounds", smoothing_window=1,
    ),
}


def figure_ids() -> tuple[str, ...]:
    return tuple(sorted(FIGURES, key=lambda f: int(f[3:])))


def get_spec(figure_id: str) -> FigureSpec:
    key = figure_id.lower()
    if key not in FIGURES:
        raise KeyError(f"unknown figure id '{figure_id}'; expected one of {figure_ids()}")
    return FIGURES[key]
