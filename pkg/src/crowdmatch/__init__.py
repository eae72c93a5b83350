"""Deterministic simulator and analysis library for decentralized task
assignment in mobile crowdsensing markets."""

from .agents import (
    AgentState,
    CollisionAvoidingAgent,
    EpsilonGreedyAgent,
    McspResponse,
    RandomTypeAgent,
    SensingOffer,
)
from .config import ConfigError, ScenarioConfig, load_config, save_config
from .matching import (
    PreferenceProfile,
    assignment_welfare,
    count_blocking_pairs,
    deferred_acceptance,
    is_stable,
    max_social_welfare,
)
from .mcsp import AssignedPair, Assignment, PublishedBoard, allocate, publish
from .metrics import (
    BoundParams,
    RoundRecord,
    avg_completion_time,
    cumulative_regret,
    energy_efficiency,
    instability_bound,
    instantaneous_regret,
    regret_bound,
    social_welfare,
    trailing_mean,
)
from .model import (
    EffortSample,
    MuProfile,
    TaskInstance,
    TaskType,
    cost,
    effort_price,
    mcsp_utility,
    mu_utility,
    payment,
    sample_effort,
)
from .presets import build_preset, preset_ids
from .simulator import (
    CampaignResult,
    MetricsSeries,
    Realization,
    STRATEGIES,
    realize,
    run,
    run_campaign,
    run_on_realization,
)
from .world import ExpectationTable, World, build_world, ground_truth_expectations

__version__ = "0.1.0"
