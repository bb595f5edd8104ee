"""Consultation engines: leader-commit (BEE) and aggregate-commit (SWARM).

A run is strictly sequential; the per-round loop lives in compiled kernels
(`_kernels`) while this module owns validation, trace assembly, and the
scalar operations used by tests and small-scale reproductions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .committees import majority_vote
from .policies import PolicyKind, PolicySpec
from .world import World

_POLICY_CODE = {
    PolicyKind.UCB1: _kernels.P_UCB1,
    PolicyKind.KLUCB: _kernels.P_KLUCB,
    PolicyKind.KLUCB_PLUS: _kernels.P_KLUCB_PLUS,
    PolicyKind.IMED: _kernels.P_IMED,
    PolicyKind.MOSS: _kernels.P_MOSS,
    PolicyKind.THOMPSON: _kernels.P_THOMPSON,
}


@dataclass
class RoundOutcome:
    round: int
    committee: tuple[int, ...]
    leader: int | None
    decision: int
    rewards: dict[int, int]
    label: int  # oracle-only channel, consumed by metrics


@dataclass
class RunTrace:
    mode: str
    policy: PolicySpec
    m: int
    horizon: int
    labels: np.ndarray  # int8 (T,)
    decisions: np.ndarray  # int8 (T,)
    leaders: np.ndarray  # int32 (T,), -1 on the initialization round
    committees: np.ndarray  # int16 (T, m), -1 row for the initialization round
    consults: np.ndarray  # int64 (M,)
    agreements: np.ndarray  # int64 (M,)

    @property
    def expert_count(self) -> int:
        return len(self.consults)

    @property
    def alpha(self) -> np.ndarray:
        """Beta posterior alphas implied by the agreement bookkeeping."""
        return 1.0 + self.agreements

    @property
    def beta(self) -> np.ndarray:
        return 1.0 + self.consults - self.agreements

    @property
    def pbar(self) -> np.ndarray:
        return self.agreements / self.consults

    @property
    def decision_correct(self) -> np.ndarray:
        return (self.decisions == self.labels).astype(np.int8)


def agreement_reward(i: int, opinions: dict[int, int], tie_break) -> int:
    """1 iff expert i matches the majority vote of the other members."""
    if i not in opinions:
        raise ValueError(f"expert {i} not in the consulted committee")
    if len(opinions) < 2:
        raise ValueError("agreement reward needs at least one peer")
    peers = [x for j, x in opinions.items() if j != i]
    return int(opinions[i] == majority_vote(peers, tie_break))


def lnb_aggregate(
    opinions: dict[int, int], estimates: dict[int, float], tie_break
) -> int:
    """Linearized naive-Bayes vote: sign of sum X_i * (pbar_i - 1/2)."""
    s = sum(opinions[i] * (estimates[i] - 0.5) for i in opinions)
    if s > 0:
        return 1
    if s < 0:
        return -1
    return 1 if tie_break.random() < 0.5 else -1


def initialize(world: World, tie_break=None):
    """Consult every expert on the first task; commit the majority vote.

    Returns per-expert ExpertStats after one update each, plus the first
    RoundOutcome.
    """
    from .policies import ExpertStats, posterior_update

    if tie_break is None:
        tie_break = world.tiebreak_rng
    record = world.sample_round(range(world.expert_count))
    rewards = {
        i: agreement_reward(i, record.opinions, tie_break)
        for i in range(world.expert_count)
    }
    stats = [
        posterior_update(ExpertStats(), rewards[i])
        for i in range(world.expert_count)
    ]
    decision = majority_vote(list(record.opinions.values()), tie_break)
    outcome = RoundOutcome(
        round=1,
        committee=record.committee,
        leader=None,
        decision=decision,
        rewards=rewards,
        label=record.label,
    )
    return stats, outcome


def _validate_run(world: World, m: int, horizon: int) -> None:
    if m > world.expert_count:
        raise ValueError(f"m={m} exceeds expert count {world.expert_count}")
    if m < 2:
        raise ValueError("m must be at least 2")
    if horizon < 1:
        raise ValueError("horizon must be positive")
    if m % 2 == 1:
        warnings.warn(
            f"odd committee size m={m}: peer votes can tie, adding coin flips "
            "to agreement rewards",
            stacklevel=3,
        )


def _run(
    world: World,
    spec: PolicySpec,
    m: int,
    horizon: int,
    mode: int,
    oracle_rewards: bool,
) -> RunTrace:
    _validate_run(world, m, horizon)
    experts = world.expert_count
    labels = world.labels_block(horizon)
    opinions = world.opinions_matrix(horizon)
    coins = world.tiebreak_pool((m + 1) * horizon + experts + 16)

    consults = np.zeros(experts, np.int64)
    agreements = np.zeros(experts, np.int64)
    leaders = np.empty(horizon, np.int32)
    decisions = np.empty(horizon, np.int8)
    committees = np.empty((horizon, m), np.int16)

    if spec.kind == PolicyKind.THOMPSON:
        _kernels.seed_policy_rng(world.policy_seed())

    _kernels.run_kernel(
        opinions,
        labels,
        coins,
        _POLICY_CODE[spec.kind],
        mode,
        1 if oracle_rewards else 0,
        m,
        consults,
        agreements,
        leaders,
        decisions,
        committees,
        spec.klucb_c,
        spec.klucb_tolerance,
    )
    return RunTrace(
        mode="bee" if mode == _kernels.MODE_BEE else "swarm",
        policy=spec,
        m=m,
        horizon=horizon,
        labels=labels,
        decisions=decisions,
        leaders=leaders,
        committees=committees,
        consults=consults,
        agreements=agreements,
    )


def run_bee(
    world: World,
    spec: PolicySpec,
    m: int,
    horizon: int,
    *,
    oracle_rewards: bool = False,
) -> RunTrace:
    """Adaptive consultation committing the leader's opinion each round."""
    return _run(world, spec, m, horizon, _kernels.MODE_BEE, oracle_rewards)


def run_swarm(
    world: World,
    spec: PolicySpec,
    m: int,
    horizon: int,
    *,
    oracle_rewards: bool = False,
) -> RunTrace:
    """Adaptive consultation committing the weighted aggregate decision.

    Agreement statistics are updated with the current round before the
    aggregate is formed, so the weights include round t's update.
    """
    return _run(world, spec, m, horizon, _kernels.MODE_SWARM, oracle_rewards)


@dataclass
class FixedCommitteeTrace:
    policy: PolicySpec
    committee: tuple[int, ...]
    candidates: tuple[int, ...]
    horizon: int
    leaders: np.ndarray  # int32 (T,), indices into `candidates`
    consults: np.ndarray  # int64 (n_candidates,)
    agreements: np.ndarray


def run_fixed_committee(
    world: World,
    spec: PolicySpec,
    committee: tuple[int, ...],
    candidates: tuple[int, ...],
    horizon: int,
) -> FixedCommitteeTrace:
    """Pinned-peer setting: the committee is consulted every round and the
    policy picks one leader per round among the outside candidates, paid in
    agreement rewards against the committee vote."""
    if set(committee) & set(candidates):
        raise ValueError("committee and candidates must be disjoint")
    if horizon < len(candidates):
        raise ValueError("horizon shorter than the initialization pass")
    labels = world.labels_block(horizon)
    vote = np.zeros(horizon, np.int64)
    for i in committee:
        vote += world.opinion_column(i, horizon, labels).astype(np.int64)
    ties = vote == 0
    if ties.any():
        coins = world.tiebreak_pool(horizon)
        vote = np.where(ties, np.where(coins < 0.5, 1, -1), np.sign(vote))
    else:
        vote = np.sign(vote)
    vote = vote.astype(np.int8)

    cand_opinions = np.empty((horizon, len(candidates)), np.int8)
    for k, i in enumerate(candidates):
        cand_opinions[:, k] = world.opinion_column(i, horizon, labels)

    n = len(candidates)
    consults = np.zeros(n, np.int64)
    agreements = np.zeros(n, np.int64)
    leaders = np.empty(horizon, np.int32)
    if spec.kind == PolicyKind.THOMPSON:
        _kernels.seed_policy_rng(world.policy_seed())
    _kernels.lemma_kernel(
        cand_opinions,
        vote,
        _POLICY_CODE[spec.kind],
        horizon,
        consults,
        agreements,
        leaders,
        spec.klucb_c,
        spec.klucb_tolerance,
    )
    return FixedCommitteeTrace(
        policy=spec,
        committee=tuple(committee),
        candidates=tuple(candidates),
        horizon=horizon,
        leaders=leaders,
        consults=consults,
        agreements=agreements,
    )
