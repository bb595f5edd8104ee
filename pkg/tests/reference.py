"""Pure-Python reference engine, built from the scalar operations.

Deliberately slow and literal; the compiled kernels must reproduce it
step for step (same trajectories, same coin consumption order).
"""

from __future__ import annotations

import numpy as np

from bee import _kernels
from bee.engine import RunTrace, agreement_reward, lnb_aggregate
from bee.committees import majority_vote
from bee.policies import (
    ExpertStats,
    PolicyKind,
    PolicySpec,
    compute_indices,
    posterior_update,
)
from bee.world import World


class PoolCoins:
    """Sequential uniform source backed by a pregenerated pool."""

    def __init__(self, pool: np.ndarray):
        self.pool = pool
        self.used = 0

    def random(self) -> float:
        v = float(self.pool[self.used])
        self.used += 1
        return v


def _psi(stats, spec, t):
    if spec.kind == PolicyKind.THOMPSON:
        agreements = np.array([s.agreements for s in stats], np.float64)
        consults = np.array([s.consults for s in stats], np.float64)
        out = np.empty(len(stats))
        _kernels.thompson_draws(agreements, consults, out)
        return list(out)
    return compute_indices(stats, spec, t)


def run_reference(
    world: World,
    spec: PolicySpec,
    m: int,
    horizon: int,
    mode: str,
    oracle_rewards: bool = False,
) -> RunTrace:
    experts = world.expert_count
    coins = PoolCoins(world.tiebreak_pool((m + 1) * horizon + experts + 16))
    if spec.kind == PolicyKind.THOMPSON:
        _kernels.seed_policy_rng(world.policy_seed())

    stats = [ExpertStats() for _ in range(experts)]
    labels = np.empty(horizon, np.int8)
    decisions = np.empty(horizon, np.int8)
    leaders = np.full(horizon, -1, np.int32)
    committees = np.full((horizon, m), -1, np.int16)

    record = world.sample_round(range(experts))
    labels[0] = record.label
    for i in range(experts):
        if oracle_rewards:
            r = int(record.opinions[i] == record.label)
        else:
            r = agreement_reward(i, record.opinions, coins)
        stats[i] = posterior_update(stats[i], r)
    decisions[0] = majority_vote(
        [record.opinions[i] for i in range(experts)], coins
    )

    for ti in range(1, horizon):
        t = ti + 1
        psi = _psi(stats, spec, t)
        if spec.select_extreme == "min":
            order = sorted(range(experts), key=lambda i: (psi[i], i))
        else:
            order = sorted(range(experts), key=lambda i: (-psi[i], i))
        committee = order[:m]
        leader = committee[0]
        committees[ti] = committee
        leaders[ti] = leader

        record = world.sample_round(committee)
        labels[ti] = record.label
        if mode == "bee":
            decisions[ti] = record.opinions[leader]
        for i in committee:
            if oracle_rewards:
                r = int(record.opinions[i] == record.label)
            else:
                r = agreement_reward(i, record.opinions, coins)
            stats[i] = posterior_update(stats[i], r)
        if mode == "swarm":
            estimates = {i: stats[i].pbar for i in committee}
            decisions[ti] = lnb_aggregate(record.opinions, estimates, coins)

    return RunTrace(
        mode=mode,
        policy=spec,
        m=m,
        horizon=horizon,
        labels=labels,
        decisions=decisions,
        leaders=leaders,
        committees=committees,
        consults=np.array([s.consults for s in stats], np.int64),
        agreements=np.array([s.agreements for s in stats], np.int64),
    )
