"""Regret metrics against oracle baselines and the fixed-committee bound
calculators. Everything here is post-processing: metrics may read true
labels and competences, the engines never do."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .committees import committee_correct_prob, pseudo_competence_exact
from .engine import FixedCommitteeTrace, RunTrace
from .policies import PolicyKind
from .world import CompetenceProfile, World, best_expert


@dataclass
class RegretReport:
    normalized_realized: float
    normalized_pseudo: float
    baseline: float
    per_round_cumulative: np.ndarray | None = None
    mean: float | None = None
    std: float | None = None
    count: int = 1


@dataclass(frozen=True)
class BoundParams:
    gaps: tuple[float, ...]
    potential: float
    committee_correct: float
    policy_constant: float
    horizon: int
    expert_count: int
    thompson_epsilon: float = 0.2


def realized_regret(trace: RunTrace, profile: CompetenceProfile, world: World) -> float:
    """Normalized shortfall of decision accuracy versus the true best
    expert's realized opinions (sampled from its own substream every round,
    consulted or not)."""
    if len(trace.labels) != trace.horizon:
        raise ValueError("trace length mismatch")
    star = best_expert(profile)
    x_star = world.opinion_column(star, trace.horizon, trace.labels)
    best_correct = (x_star == trace.labels).mean()
    return float(best_correct - trace.decision_correct.mean())


def realized_regret_curve(
    trace: RunTrace, profile: CompetenceProfile, world: World
) -> np.ndarray:
    star = best_expert(profile)
    x_star = world.opinion_column(star, trace.horizon, trace.labels)
    diff = (x_star == trace.labels).astype(np.int64) - trace.decision_correct.astype(
        np.int64
    )
    t = np.arange(1, trace.horizon + 1)
    return np.cumsum(diff) / t


def _leader_competences(trace: RunTrace, profile: CompetenceProfile) -> np.ndarray:
    """Conditional correctness probability of each committed decision.

    The initialization round commits the full-population majority vote, so
    its term is the committee correctness probability.
    """
    comp = profile.as_array()
    vals = np.empty(trace.horizon)
    vals[0] = committee_correct_prob(list(comp))
    vals[1:] = comp[trace.leaders[1:]]
    return vals


def pseudo_regret_bee(trace: RunTrace, profile: CompetenceProfile) -> float:
    """Best competence minus the average competence of the chosen leaders."""
    return float(max(profile.competences) - _leader_competences(trace, profile).mean())


def pseudo_regret_bee_curve(trace: RunTrace, profile: CompetenceProfile) -> np.ndarray:
    vals = _leader_competences(trace, profile)
    t = np.arange(1, trace.horizon + 1)
    return max(profile.competences) - np.cumsum(vals) / t


def _weighted_vote_accuracy_enum(ps: np.ndarray, ws: np.ndarray) -> float:
    """Exact accuracy of sign(sum w_i s_i) over all 2^m correctness
    patterns, ties counted half."""
    m = len(ps)
    idx = np.arange(2**m, dtype=np.int64)
    prob = np.ones(2**m)
    score = np.zeros(2**m)
    for j in range(m):
        bit = ((idx >> j) & 1).astype(bool)  # True = member j correct
        prob *= np.where(bit, ps[j], 1.0 - ps[j])
        score += np.where(bit, ws[j], -ws[j])
    tol = 1e-12 * max(1.0, float(np.abs(ws).sum()))
    return float(prob[score > tol].sum() + 0.5 * prob[np.abs(score) <= tol].sum())


def _weighted_vote_accuracy_mc(
    ps: np.ndarray, ws: np.ndarray, samples: int, rng: np.random.Generator
) -> float:
    correct = 0.0
    done = 0
    chunk = 1_000_000
    tol = 1e-12 * max(1.0, float(np.abs(ws).sum()))
    while done < samples:
        n = min(chunk, samples - done)
        bits = rng.random((n, len(ps))) < ps
        score = np.where(bits, ws, -ws).sum(axis=1)
        correct += float((score > tol).sum()) + 0.5 * float(
            (np.abs(score) <= tol).sum()
        )
        done += n
    return correct / samples


def oracle_committee_accuracy(
    profile: CompetenceProfile,
    m: int,
    *,
    mc_samples: int = 10_000_000,
    enum_limit: int = 20,
    rng: np.random.Generator | None = None,
) -> float:
    """Accuracy of the true-weight linearized naive-Bayes vote over the
    top-m experts by true competence. Exact enumeration up to `enum_limit`
    members, Monte Carlo beyond."""
    if m > profile.expert_count:
        raise ValueError("m exceeds expert count")
    comp = profile.as_array()
    top = np.lexsort((np.arange(len(comp)), -comp))[:m]
    ps = comp[top]
    ws = ps - 0.5
    if m == 1:
        return float(ps[0])
    if m <= enum_limit:
        return _weighted_vote_accuracy_enum(ps, ws)
    if rng is None:
        rng = np.random.default_rng(0)
    return _weighted_vote_accuracy_mc(ps, ws, mc_samples, rng)


def oracle_committee_accuracy_exhaustive(
    profile: CompetenceProfile, m: int
) -> tuple[float, tuple[int, ...]]:
    """Search all size-m committees for the best true-weight vote accuracy.
    Only feasible for small populations; used to cross-check the top-m
    shortcut."""
    comp = profile.as_array()
    best_val, best_comm = -1.0, ()
    for comm in itertools.combinations(range(len(comp)), m):
        ps = comp[list(comm)]
        val = _weighted_vote_accuracy_enum(ps, ps - 0.5)
        if val > best_val + 1e-15:
            best_val, best_comm = val, comm
    return best_val, best_comm


def pseudo_regret_swarm(
    traces: Sequence[RunTrace], profiles: Sequence[CompetenceProfile], m: int
) -> RegretReport:
    """Oracle committee accuracy minus empirical decision accuracy, averaged
    over replications. Each replication is compared against its own
    profile's oracle baseline."""
    if not traces:
        raise ValueError("need at least one replication")
    if len(traces) != len(profiles):
        raise ValueError("traces and profiles misaligned")
    per_rep = []
    baselines = []
    for trace, profile in zip(traces, profiles):
        baseline = oracle_committee_accuracy(profile, m)
        baselines.append(baseline)
        per_rep.append(baseline - float(trace.decision_correct.mean()))
    per_rep = np.asarray(per_rep)
    return RegretReport(
        normalized_realized=math.nan,
        normalized_pseudo=float(per_rep.mean()),
        baseline=float(np.mean(baselines)),
        mean=float(per_rep.mean()),
        std=float(per_rep.std(ddof=1)) if len(per_rep) > 1 else 0.0,
        count=len(per_rep),
    )


def gaps(profile: CompetenceProfile) -> np.ndarray:
    comp = profile.as_array()
    return comp.max() - comp


def potential(profile: CompetenceProfile, committee: Sequence[int], horizon: int) -> float:
    """(log T / T) * sum over positive-gap experts outside the committee of
    1 / gap."""
    d = gaps(profile)
    outside = [i for i in range(profile.expert_count) if i not in set(committee)]
    total = sum(1.0 / d[i] for i in outside if d[i] > 0.0)
    return math.log(horizon) / horizon * total


def lemma_bound(
    profile: CompetenceProfile,
    committee: Sequence[int],
    kind: PolicyKind,
    horizon: int,
    *,
    thompson_epsilon: float = 0.2,
) -> float:
    """Fixed-committee pseudo-regret bound in agreement-reward space."""
    comp = profile.as_array()
    p_c = committee_correct_prob([comp[i] for i in committee])
    if p_c <= 0.5:
        raise ValueError(f"committee correctness {p_c} is not above 1/2")
    shrink = 2.0 * p_c - 1.0
    if kind == PolicyKind.MOSS:
        d = gaps(profile)
        outside = [i for i in range(profile.expert_count) if i not in set(committee)]
        total = 0.0
        for i in outside:
            if d[i] <= 0.0:
                continue
            total += (
                max(math.log(horizon * (shrink * d[i]) ** 2 / profile.expert_count), 1.0)
                / d[i]
            )
        return 23.0 * profile.expert_count / horizon * total / shrink
    phi = potential(profile, committee, horizon)
    if kind == PolicyKind.UCB1:
        return 10.0 * phi / shrink
    if kind in (PolicyKind.KLUCB, PolicyKind.KLUCB_PLUS, PolicyKind.IMED):
        return 0.5 * phi / shrink
    if kind == PolicyKind.THOMPSON:
        eps = thompson_epsilon
        if eps <= 0:
            raise ValueError("thompson_epsilon must be positive")
        return (1.0 + eps) * phi / shrink + profile.expert_count / (
            eps**2 * horizon
        )
    raise ValueError(f"unknown policy kind {kind}")


def fixed_committee_pseudo_regret(
    trace: FixedCommitteeTrace, profile: CompetenceProfile
) -> float:
    """Empirical pseudo regret of a pinned-committee run, measured in
    agreement-reward space via the exact pseudo competences."""
    comp = profile.as_array()
    p_c = committee_correct_prob([comp[i] for i in trace.committee])
    cand = np.array([pseudo_competence_exact(comp[i], p_c) for i in trace.candidates])
    return float(cand.max() - cand[trace.leaders].mean())
