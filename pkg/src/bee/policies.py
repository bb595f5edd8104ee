"""Selection statistics for the five consultation policies.

All indices operate on agreement statistics only: `agreements / consults`
estimates the probability of agreeing with the peers' vote, never the
probability of being objectively correct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np


class PolicyKind(str, Enum):
    UCB1 = "ucb1"
    KLUCB = "klucb"  # plain budget: log t + c * log log t
    KLUCB_PLUS = "klucb+"  # budget: log(t / T_i), clamped at 0
    IMED = "imed"
    MOSS = "moss"
    THOMPSON = "thompson"


class UninitializedExpertError(ValueError):
    """Raised when an index is requested for a never-consulted expert."""


@dataclass(frozen=True)
class PolicySpec:
    kind: PolicyKind
    horizon: int | None = None  # required by MOSS
    expert_count: int | None = None  # required by MOSS
    klucb_c: float = 0.0
    klucb_tolerance: float = 1e-9

    def __post_init__(self):
        if self.kind == PolicyKind.MOSS and (
            self.horizon is None or self.expert_count is None
        ):
            raise ValueError("MOSS requires horizon and expert_count")
        if self.klucb_c < 0:
            raise ValueError("klucb_c must be >= 0")

    @property
    def select_extreme(self) -> str:
        return "min" if self.kind == PolicyKind.IMED else "max"


@dataclass(frozen=True)
class ExpertStats:
    consults: int = 0
    agreements: int = 0
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.agreements > self.consults or self.agreements < 0:
            raise ValueError("agreements must lie in [0, consults]")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("Beta parameters must be positive")

    @property
    def pbar(self) -> float:
        if self.consults == 0:
            raise UninitializedExpertError("expert never consulted")
        return self.agreements / self.consults


def kl_divergence(p: float, q: float) -> float:
    """Bernoulli KL d(p, q) with 0 log 0 = 0 and +inf at q-boundaries."""
    if not 0.0 <= p <= 1.0 or not 0.0 <= q <= 1.0:
        raise ValueError("arguments must lie in [0, 1]")
    if p == q:
        return 0.0
    if q <= 0.0 or q >= 1.0:
        return math.inf
    out = 0.0
    if p > 0.0:
        out += p * math.log(p / q)
    if p < 1.0:
        out += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return out


def ucb1_index(stats: ExpertStats, t: int) -> float:
    return stats.pbar + math.sqrt(2.0 * math.log(t) / stats.consults)


def klucb_budget(t: int, consults: int, spec: PolicySpec) -> float:
    if spec.kind == PolicyKind.KLUCB_PLUS:
        return max(math.log(t / consults), 0.0)
    logt = math.log(t)
    budget = logt
    if spec.klucb_c > 0.0 and logt > 0.0:
        budget += spec.klucb_c * math.log(logt)
    return max(budget, 0.0)


def klucb_index(stats: ExpertStats, t: int, spec: PolicySpec) -> float:
    """Largest q with consults * d(pbar, q) <= budget, by bisection."""
    pbar = stats.pbar
    budget = klucb_budget(t, stats.consults, spec)
    if budget <= 0.0:
        return pbar
    hi = 1.0 - 1e-12
    if stats.consults * kl_divergence(pbar, hi) <= budget:
        return hi
    lo = pbar
    vlo = 0.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v = stats.consults * kl_divergence(pbar, mid)
        if v <= budget:
            lo = mid
            vlo = v
        else:
            hi = mid
        # Terminate on the q width and on the budget-space residual, so the
        # solver stays sharp where the divergence is steep.
        if hi - lo <= spec.klucb_tolerance and budget - vlo <= 1e-8:
            break
    return lo


def imed_index(stats: ExpertStats, current_max_estimate: float) -> float:
    n = stats.consults
    return n * kl_divergence(stats.pbar, current_max_estimate) + math.log(n)


def moss_index(stats: ExpertStats, spec: PolicySpec) -> float:
    if spec.horizon is None or spec.expert_count is None:
        raise ValueError("MOSS requires horizon and expert_count")
    n = stats.consults
    bonus = max(math.log(spec.horizon / (spec.expert_count * n)), 0.0) / n
    return stats.pbar + math.sqrt(bonus)


def thompson_index(stats: ExpertStats, rng: np.random.Generator) -> float:
    return float(rng.beta(stats.alpha, stats.beta))


def posterior_update(stats: ExpertStats, reward: int) -> ExpertStats:
    if reward not in (0, 1):
        raise ValueError("reward must be 0 or 1")
    return replace(
        stats,
        consults=stats.consults + 1,
        agreements=stats.agreements + reward,
        alpha=stats.alpha + reward,
        beta=stats.beta + (1 - reward),
    )


def compute_indices(
    all_stats: Sequence[ExpertStats],
    spec: PolicySpec,
    t: int,
    rng: np.random.Generator | None = None,
) -> list[float]:
    for s in all_stats:
        if s.consults == 0:
            raise UninitializedExpertError("uninitialized expert present")
    kind = spec.kind
    if kind == PolicyKind.UCB1:
        return [ucb1_index(s, t) for s in all_stats]
    if kind in (PolicyKind.KLUCB, PolicyKind.KLUCB_PLUS):
        return [klucb_index(s, t, spec) for s in all_stats]
    if kind == PolicyKind.IMED:
        pmax = max(s.pbar for s in all_stats)
        return [imed_index(s, pmax) for s in all_stats]
    if kind == PolicyKind.MOSS:
        return [moss_index(s, spec) for s in all_stats]
    if kind == PolicyKind.THOMPSON:
        if rng is None:
            raise ValueError("Thompson sampling needs an RNG")
        return [thompson_index(s, rng) for s in all_stats]
    raise ValueError(f"unknown policy kind {kind}")


def rank_for_consultation(
    all_stats: Sequence[ExpertStats],
    spec: PolicySpec,
    t: int,
    m: int,
    rng: np.random.Generator | None = None,
) -> tuple[list[int], int]:
    """Top-m experts by the policy statistic (bottom-m for IMED) plus the
    single best among them as the designated leader. Ties go to the lowest
    expert index."""
    if m > len(all_stats):
        raise ValueError("committee size exceeds population")
    psi = compute_indices(all_stats, spec, t, rng)
    if spec.select_extreme == "min":
        order = sorted(range(len(psi)), key=lambda i: (psi[i], i))
    else:
        order = sorted(range(len(psi)), key=lambda i: (-psi[i], i))
    committee = order[:m]
    return committee, committee[0]
