"""Exact analytics of majority votes and peer-agreement competences.

The committee correctness probability is computed with the heterogeneous
count-distribution DP (O(n^2)); brute-force enumeration exists only as a
test oracle. Ties of an even-sized vote contribute weight 1/2 analytically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

INDETERMINATE_TOL = 1e-12


@dataclass(frozen=True)
class Committee:
    members: tuple[int, ...]
    member_competences: tuple[float, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("committee must be non-empty")
        if len(set(self.members)) != len(self.members):
            raise ValueError("duplicate committee members")
        if len(self.members) != len(self.member_competences):
            raise ValueError("members and competences misaligned")


@dataclass(frozen=True)
class PseudoCompetence:
    """Agreement probability with a peer vote, tagged by how it was obtained."""

    value: float
    basis: str  # exact-formula | leave-one-out-exact | empirical

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"pseudo competence {self.value} outside [0, 1]")
        if self.basis not in ("exact-formula", "leave-one-out-exact", "empirical"):
            raise ValueError(f"unknown basis {self.basis!r}")


def majority_vote(opinions: Sequence[int], tie_break) -> int:
    """Sign of the opinion sum; an exact tie is resolved by one fair coin.

    `tie_break` is anything with a .random() -> [0, 1) method.
    """
    if len(opinions) == 0:
        raise ValueError("cannot vote over an empty opinion list")
    s = int(sum(opinions))
    if s > 0:
        return 1
    if s < 0:
        return -1
    return 1 if tie_break.random() < 0.5 else -1


def correct_count_pmf(competences: Sequence[float]) -> np.ndarray:
    """PMF of the number of correct members (heterogeneous binomial counts)."""
    pmf = np.array([1.0])
    for p in competences:
        nxt = np.zeros(len(pmf) + 1)
        nxt[:-1] = pmf * (1.0 - p)
        nxt[1:] += pmf * p
        pmf = nxt
    return pmf


def committee_correct_prob(competences: Sequence[float]) -> float:
    """Probability the majority vote is correct, counting ties half."""
    n = len(competences)
    if n == 0:
        raise ValueError("empty committee")
    for p in competences:
        if not 0.0 < p < 1.0:
            raise ValueError(f"competence {p} outside (0, 1)")
    pmf = correct_count_pmf(competences)
    k = np.arange(n + 1)
    prob = float(pmf[2 * k > n].sum())
    if n % 2 == 0:
        prob += 0.5 * float(pmf[n // 2])
    return prob


def pseudo_competence_exact(p_i: float, p_c: float) -> float:
    """Agreement probability of an outside expert with a committee's vote."""
    return p_i * p_c + (1.0 - p_i) * (1.0 - p_c)


def pseudo_gap(p_i: float, p_j: float, p_c: float) -> float:
    """Difference of two pseudo competences against the same committee."""
    return (2.0 * p_c - 1.0) * (p_i - p_j)


def leave_one_out_pseudo(i: int, committee: Committee) -> float:
    """Pseudo competence of member i against the committee minus itself.

    Valid because an expert's opinion is conditionally independent of the
    peers' vote given the label, so the outside-expert formula applies with
    the peer committee C \\ {i}.
    """
    if i not in committee.members:
        raise ValueError(f"expert {i} not in committee")
    if len(committee.members) < 2:
        raise ValueError("leave-one-out needs at least 2 members")
    pos = committee.members.index(i)
    peers = [p for k, p in enumerate(committee.member_competences) if k != pos]
    return pseudo_competence_exact(
        committee.member_competences[pos], committee_correct_prob(peers)
    )


def ordering_preserved(profile, committee_indices: Sequence[int]) -> bool | None:
    """Whether pseudo competences order out-of-committee experts like the
    true competences. Returns None when the committee is uninformative
    (p_C within INDETERMINATE_TOL of 1/2)."""
    comp = profile.competences
    members = set(committee_indices)
    p_c = committee_correct_prob([comp[i] for i in committee_indices])
    if abs(p_c - 0.5) <= INDETERMINATE_TOL:
        return None
    outside = [i for i in range(len(comp)) if i not in members]
    for a in range(len(outside)):
        for b in range(a + 1, len(outside)):
            i, j = outside[a], outside[b]
            gap_true = comp[i] - comp[j]
            gap_pseudo = pseudo_competence_exact(comp[i], p_c) - pseudo_competence_exact(
                comp[j], p_c
            )
            if np.sign(gap_pseudo) != np.sign(gap_true):
                return False
    return True
