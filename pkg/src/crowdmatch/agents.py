"""Unit-side decision processes: the collision-avoiding learner and baselines.

Agents see only the published board, their own platform responses and their
own realized (utility, effort) observations. They never see other agents or
the ground-truth tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable

import numpy as np

from .model import effort_price

if TYPE_CHECKING:
    from .mcsp import PublishedBoard
    from .model import EffortSample


@dataclass(frozen=True)
class SensingOffer:
    """One unit's bid for one round: a task type and a proposed payment."""

    mu_id: int
    type_id: int
    proposal: float
    is_free: bool = False

    def __post_init__(self) -> None:
        if self.proposal < 0.0:
            raise ValueError("proposed payment must be >= 0")
        if self.is_free and self.proposal != 0.0:
            raise ValueError("a free offer must propose payment 0")


@dataclass(frozen=True)
class McspResponse:
    """Platform answer to one offer: the assigned task id, or a rejection."""

    mu_id: int
    accepted: bool
    task_id: int | None = None


def default_exploration(t: int, warmup: int = 30, scale: float = 1.0) -> float:
    """Full exploration through the learning phase, then a 1/t decay."""
    if t <= warmup:
        return 1.0
    return min(1.0, scale / (t - warmup))


def default_rejection_increment(t: int) -> float:
    """Rejection-counter increment 1/t."""
    return 1.0 / t


@dataclass
class AgentState:
    """Learning state of one unit: running means, counters and the last offer."""

    mu_id: int
    util_estimate: np.ndarray  # (Z,) running mean of observed utilities
    effort_time: np.ndarray  # (Z,) running mean of observed total times
    effort_energy: np.ndarray  # (Z,) running mean of observed energies
    assign_count: np.ndarray  # (Z,) executed tasks per type
    util_count: np.ndarray  # (Z,) samples folded into util_estimate
    reject_gamma: np.ndarray  # (Z,) rejection counters
    last_offer: SensingOffer | None = None
    held_type: int | None = None  # type executed last round, None after a rejection
    rng: np.random.Generator = field(default_factory=np.random.default_rng)

    @classmethod
    def fresh(cls, mu_id: int, n_types: int, rng: np.random.Generator) -> "AgentState":
        return cls(
            mu_id=mu_id,
            util_estimate=np.zeros(n_types),
            effort_time=np.zeros(n_types),
            effort_energy=np.zeros(n_types),
            assign_count=np.zeros(n_types, dtype=np.int64),
            util_count=np.zeros(n_types, dtype=np.int64),
            reject_gamma=np.zeros(n_types),
            rng=rng,
        )


class _LearningAgent:
    """Shared plumbing: estimate bookkeeping and estimate-based bids.

    Bids quote the platform's public rate card applied to the unit's current
    effort estimate: the expected payment for the type.
    """

    def __init__(
        self,
        mu_id: int,
        n_types: int,
        rng: np.random.Generator,
        *,
        pay_time_rate: float,
        pay_energy_rate: float,
        pay_factor: float,
        exploration: Callable[[int], float] = default_exploration,
    ) -> None:
        self.n_types = n_types
        self.pay_time_rate = pay_time_rate
        self.pay_energy_rate = pay_energy_rate
        self.pay_factor = pay_factor
        self.exploration = exploration
        self.state = AgentState.fresh(mu_id, n_types, rng)

    @property
    def mu_id(self) -> int:
        return self.state.mu_id

    def estimate_bids(self) -> np.ndarray:
        """Per-type bid implied by the current effort estimate."""
        st = self.state
        return self.pay_factor * (
            self.pay_time_rate * st.effort_time + self.pay_energy_rate * st.effort_energy
        )

    def _record_execution(self, z: int, utility: float, effort: "EffortSample") -> None:
        st = self.state
        st.assign_count[z] += 1
        n = st.assign_count[z]
        st.effort_time[z] += (effort.t_total - st.effort_time[z]) / n
        st.effort_energy[z] += (effort.energy - st.effort_energy[z]) / n
        st.util_count[z] += 1
        st.util_estimate[z] += (utility - st.util_estimate[z]) / st.util_count[z]

    def _greedy(self, allowed: np.ndarray) -> int:
        """Highest utility estimate among ``allowed`` types, random on exact ties.

        Random tie-breaking matters early on, when many types share the zero
        initial estimate; a fixed order would herd every unit onto the same
        type.
        """
        masked = np.where(allowed, self.state.util_estimate, -np.inf)
        best = masked.max()
        ties = np.flatnonzero(masked == best)
        if ties.size == 1:
            return int(ties[0])
        return int(ties[self.state.rng.integers(ties.size)])

    def _check_observation(self, response: McspResponse, observed) -> None:
        if response.accepted and observed is None:
            raise ValueError("an accepted response requires the observed (utility, effort)")
        if not response.accepted and observed is not None:
            raise ValueError("a rejection carries no observation")


class CollisionAvoidingAgent(_LearningAgent):
    """Learner with offer repetition, plausibility filtering and free offers.

    Each round the agent either repeats its previous offer (probability
    ``repeat_prob``) or recomputes per-type bids, marks types whose rejection
    counter exceeds ``free_threshold`` as free while ``t <= free_phase_end``,
    restricts itself to types it can undercut relative to last round's
    published payments, and picks epsilon-greedily among those.
    """

    strategy = "ca-mab-sfs"

    def __init__(
        self,
        mu_id: int,
        n_types: int,
        rng: np.random.Generator,
        *,
        pay_time_rate: float,
        pay_energy_rate: float,
        pay_factor: float,
        repeat_prob: float = 0.1,
        free_threshold: float = 0.5,
        free_phase_end: int = 30,
        exploration: Callable[[int], float] = default_exploration,
        rejection_increment: Callable[[int], float] = default_rejection_increment,
    ) -> None:
        super().__init__(
            mu_id, n_types, rng,
            pay_time_rate=pay_time_rate, pay_energy_rate=pay_energy_rate,
            pay_factor=pay_factor, exploration=exploration,
        )
        if not 0.0 <= repeat_prob < 1.0:
            raise ValueError("repeat_prob must lie in [0, 1)")
        self.repeat_prob = repeat_prob
        self.free_threshold = free_threshold
        self.free_phase_end = free_phase_end
        self.rejection_increment = rejection_increment

    def bids_and_free(self, t: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-type bids with the free-offer rule applied."""
        free = (self.state.reject_gamma > self.free_threshold) & (t <= self.free_phase_end)
        bids = np.where(free, 0.0, self.estimate_bids())
        return bids, free

    def make_offer(self, board: "PublishedBoard", t: int) -> SensingOffer:
        st = self.state
        if t == 1:
            z = int(st.rng.integers(self.n_types))
            bids, free = self.bids_and_free(t)
        elif st.rng.random() < self.repeat_prob and st.last_offer is not None:
            return st.last_offer  # repeated verbatim
        else:
            bids, free = self.bids_and_free(t)
            plausible = board.last_payments >= bids
            if st.held_type is not None:
                # A sitting unit may always re-offer the type it just executed;
                # its refreshed bid is compared against its own stale published
                # price otherwise, which would evict it on every upward
                # estimate drift.
                plausible[st.held_type] = True
            if plausible.any():
                if st.rng.random() < self.exploration(t):
                    candidates = np.flatnonzero(plausible)
                    z = int(candidates[st.rng.integers(candidates.size)])
                else:
                    z = self._greedy(plausible)
            else:
                z = int(st.rng.integers(self.n_types))
        offer = SensingOffer(st.mu_id, z, float(bids[z]), bool(free[z]))
        st.last_offer = offer
        return offer

    def observe(self, response: McspResponse, observed, t: int) -> None:
        """Fold an accepted execution into the estimates, or count the rejection."""
        self._check_observation(response, observed)
        offer = self.state.last_offer
        z = offer.type_id
        if response.accepted:
            utility, effort = observed
            if offer.is_free and effort.met_deadline:
                # A free execution is an investment made to learn the effort;
                # score the type by what the effort would have earned at the
                # rate card, or the waived payment poisons the estimate.
                utility += effort_price(
                    effort.t_total, effort.energy,
                    time_rate=self.pay_time_rate, energy_rate=self.pay_energy_rate,
                    factor=self.pay_factor,
                )
            self._record_execution(z, utility, effort)
            self.state.reject_gamma[z] = 0.0
            self.state.held_type = z
        else:
            self.state.held_type = None
            if t < self.free_phase_end:
                self.state.reject_gamma[z] += self.rejection_increment(t)


class EpsilonGreedyAgent(_LearningAgent):
    """Decaying epsilon-greedy over all types; a rejection counts as zero utility."""

    strategy = "eps-greedy"

    def make_offer(self, board: "PublishedBoard", t: int) -> SensingOffer:
        st = self.state
        if st.rng.random() < self.exploration(t):
            z = int(st.rng.integers(self.n_types))
        else:
            z = self._greedy(np.ones(self.n_types, dtype=bool))
        offer = SensingOffer(st.mu_id, z, float(self.estimate_bids()[z]))
        st.last_offer = offer
        return offer

    def observe(self, response: McspResponse, observed, t: int) -> None:
        self._check_observation(response, observed)
        st = self.state
        z = st.last_offer.type_id
        if response.accepted:
            utility, effort = observed
            self._record_execution(z, utility, effort)
        else:
            st.util_count[z] += 1
            st.util_estimate[z] += (0.0 - st.util_estimate[z]) / st.util_count[z]


class RandomTypeAgent(_LearningAgent):
    """Uniformly random type each round; bids track the mean of past efforts."""

    strategy = "mcsp-strategic"

    def make_offer(self, board: "PublishedBoard", t: int) -> SensingOffer:
        st = self.state
        z = int(st.rng.integers(self.n_types))
        offer = SensingOffer(st.mu_id, z, float(self.estimate_bids()[z]))
        st.last_offer = offer
        return offer

    def observe(self, response: McspResponse, observed, t: int) -> None:
        self._check_observation(response, observed)
        if response.accepted:
            utility, effort = observed
            self._record_execution(self.state.last_offer.type_id, utility, effort)
