"""Platform side of the market: task publication and offer clearing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agents import McspResponse, SensingOffer
from .model import TaskInstance, TaskType, sample_task_instance


@dataclass(frozen=True)
class PublishedBoard:
    """What every unit sees at the start of a round.

    ``last_payments`` holds, per type, the highest accepted bid of the
    previous round; +inf marks types with no previous assignment.
    """

    round: int
    tasks_by_type: tuple[tuple[TaskInstance, ...], ...]
    last_payments: np.ndarray  # (Z,)

    @property
    def n_types(self) -> int:
        return len(self.tasks_by_type)


@dataclass(frozen=True)
class AssignedPair:
    """One cleared (unit, task) pair; the bid it was cleared at is kept for publication."""

    mu_id: int
    task_id: int
    type_id: int
    proposal: float
    is_free: bool


@dataclass(frozen=True)
class Assignment:
    """Sparse unit-task matching of one round."""

    round: int
    pairs: tuple[AssignedPair, ...]

    def __post_init__(self) -> None:
        mus = [p.mu_id for p in self.pairs]
        tasks = [p.task_id for p in self.pairs]
        if len(set(mus)) != len(mus) or len(set(tasks)) != len(tasks):
            raise ValueError("each unit and each task may appear at most once")

    def type_map(self, n_mus: int) -> np.ndarray:
        """(K,) assigned type per unit, -1 where unassigned."""
        out = np.full(n_mus, -1, dtype=np.int64)
        for p in self.pairs:
            out[p.mu_id] = p.type_id
        return out


def publish(
    task_types: tuple[TaskType, ...],
    prev: Assignment | None,
    round_index: int,
    rng: np.random.Generator,
    *,
    size_rel_std: float = 0.05,
) -> PublishedBoard:
    """Draw this round's task instances and publish last round's top accepted bids.

    A type that did not fill its capacity last round publishes +inf: with open
    slots there is no marginal winner to undercut, so every bid is plausible.
    """
    tasks_by_type = []
    next_id = 0
    for ttype in task_types:
        group = tuple(
            sample_task_instance(ttype, next_id + i, round_index, rng, size_rel_std=size_rel_std)
            for i in range(ttype.count_per_round)
        )
        next_id += ttype.count_per_round
        tasks_by_type.append(group)
    last_payments = np.full(len(task_types), np.inf)
    if prev is not None:
        filled = np.zeros(len(task_types), dtype=np.int64)
        top_bid = np.zeros(len(task_types))
        for pair in prev.pairs:
            filled[pair.type_id] += 1
            top_bid[pair.type_id] = max(top_bid[pair.type_id], pair.proposal)
        for ttype in task_types:
            if filled[ttype.id] >= ttype.count_per_round:
                last_payments[ttype.id] = top_bid[ttype.id]
    return PublishedBoard(
        round=round_index, tasks_by_type=tuple(tasks_by_type), last_payments=last_payments
    )


def allocate(
    board: PublishedBoard,
    offers: list[SensingOffer],
    earnings: np.ndarray,
) -> tuple[Assignment, dict[int, McspResponse]]:
    """Clear the round: per type, accept the cheapest bids up to capacity.

    Bids above the type's earning are rejected outright. Ties break toward
    the lower unit id; accepted units take tasks in task-id order.
    """
    seen = set()
    for offer in offers:
        if offer.mu_id in seen:
            raise ValueError(f"duplicate offer from unit {offer.mu_id}")
        seen.add(offer.mu_id)
    by_type: dict[int, list[SensingOffer]] = {}
    for offer in offers:
        by_type.setdefault(offer.type_id, []).append(offer)
    pairs = []
    responses = {}
    for z, group in by_type.items():
        group.sort(key=lambda o: (o.proposal, o.mu_id))
        tasks = board.tasks_by_type[z]
        accepted = 0
        for offer in group:
            if accepted < len(tasks) and offer.proposal <= earnings[z]:
                task = tasks[accepted]
                pairs.append(
                    AssignedPair(
                        mu_id=offer.mu_id,
                        task_id=task.task_id,
                        type_id=z,
                        proposal=offer.proposal,
                        is_free=offer.is_free,
                    )
                )
                responses[offer.mu_id] = McspResponse(
                    mu_id=offer.mu_id, accepted=True, task_id=task.task_id
                )
                accepted += 1
            else:
                responses[offer.mu_id] = McspResponse(mu_id=offer.mu_id, accepted=False)
    assignment = Assignment(round=board.round, pairs=tuple(pairs))
    return assignment, responses
