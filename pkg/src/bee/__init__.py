"""Blind exploration-exploitation over stochastic experts.

Simulation library for bandit-style consultation of binary-opinion experts
when the true labels are never observed: peer-agreement reward estimation,
five index policies, unsupervised opinion aggregation, regret metrics, and
fixed-committee bound calculators, plus a CLI experiment harness.
"""

from .committees import (
    Committee,
    PseudoCompetence,
    committee_correct_prob,
    leave_one_out_pseudo,
    majority_vote,
    ordering_preserved,
    pseudo_competence_exact,
    pseudo_gap,
)
from .config import ConfigError, ExperimentConfig, parse_config
from .engine import (
    RoundOutcome,
    RunTrace,
    agreement_reward,
    initialize,
    lnb_aggregate,
    run_bee,
    run_fixed_committee,
    run_swarm,
)
from .metrics import (
    RegretReport,
    fixed_committee_pseudo_regret,
    lemma_bound,
    oracle_committee_accuracy,
    potential,
    pseudo_regret_bee,
    pseudo_regret_swarm,
    realized_regret,
)
from .policies import (
    ExpertStats,
    PolicyKind,
    PolicySpec,
    imed_index,
    kl_divergence,
    klucb_index,
    moss_index,
    posterior_update,
    rank_for_consultation,
    thompson_index,
    ucb1_index,
)
from .world import (
    CompetenceProfile,
    TaskRecord,
    World,
    WorldSeed,
    best_expert,
    build_world,
    sample_round,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
