"""Experiment configuration: defaults, JSON config files, flag overrides."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .policies import PolicyKind, PolicySpec

DEFAULT_M_VALUES = tuple(range(2, 25, 2))
DEFAULT_POLICIES = ("ucb1", "klucb", "imed", "moss", "thompson")

MODES = ("bee", "swarm", "fixed-committee-lemma")


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = "bee"
    experts: int = 100
    horizon: int = 100_000
    comp_low: float = 0.5
    comp_high: float = 0.75
    m_values: tuple[int, ...] = DEFAULT_M_VALUES
    policies: tuple[str, ...] = DEFAULT_POLICIES
    replications: int = 20
    master_seed: int = 20240501
    out_dir: str = "out"
    klucb_variant: str = "plus"  # plus | plain
    klucb_c: float = 0.0
    thompson_epsilon: float = 0.2  # bound reporting only, not a policy knob
    fixed_profile: bool = False
    full_trace: bool = False
    oracle_rewards: bool = False
    workers: int = 1
    trace_checkpoints: int = 60
    lemma_committee_size: int = 5
    lemma_committee_comp: float = 0.7
    lemma_candidates: int = 10
    lemma_best_comp: float = 0.75
    lemma_gap_low: float = 0.05
    lemma_gap_high: float = 0.2

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode: {self.mode!r} not one of {MODES}")
        if self.experts < 2:
            raise ConfigError(f"experts: need at least 2, got {self.experts}")
        if self.horizon < 1:
            raise ConfigError(f"horizon: must be positive, got {self.horizon}")
        if not 0.5 <= self.comp_low < self.comp_high <= 1.0:
            raise ConfigError(
                f"comp_low/comp_high: need 0.5 <= {self.comp_low} < "
                f"{self.comp_high} <= 1"
            )
        if not self.m_values:
            raise ConfigError("m_values: must be non-empty")
        for m in self.m_values:
            if not 2 <= m <= self.experts:
                raise ConfigError(f"m_values: m={m} outside [2, experts={self.experts}]")
        if self.replications < 1:
            raise ConfigError(f"replications: must be >= 1, got {self.replications}")
        for p in self.policies:
            if p not in DEFAULT_POLICIES:
                raise ConfigError(
                    f"policies: unknown policy {p!r}, expected one of {DEFAULT_POLICIES}"
                )
        if self.klucb_variant not in ("plus", "plain"):
            raise ConfigError(f"klucb_variant: {self.klucb_variant!r} not plus|plain")
        if self.klucb_c < 0:
            raise ConfigError("klucb_c: must be >= 0")
        if self.thompson_epsilon <= 0:
            raise ConfigError("thompson_epsilon: must be positive")
        if self.workers < 1:
            raise ConfigError("workers: must be >= 1")
        if self.mode == "fixed-committee-lemma":
            if self.lemma_committee_size < 1:
                raise ConfigError("lemma_committee_size: must be >= 1")
            if self.lemma_candidates < 2:
                raise ConfigError("lemma_candidates: must be >= 2")
            if not 0.0 < self.lemma_gap_low <= self.lemma_gap_high:
                raise ConfigError("lemma_gap_low/high: need 0 < low <= high")
            if not 0.5 < self.lemma_committee_comp < 1.0:
                raise ConfigError("lemma_committee_comp: must lie in (0.5, 1)")

    def policy_spec(self, name: str) -> PolicySpec:
        if name == "ucb1":
            kind = PolicyKind.UCB1
        elif name == "klucb":
            kind = (
                PolicyKind.KLUCB_PLUS
                if self.klucb_variant == "plus"
                else PolicyKind.KLUCB
            )
        elif name == "imed":
            kind = PolicyKind.IMED
        elif name == "moss":
            kind = PolicyKind.MOSS
        elif name == "thompson":
            kind = PolicyKind.THOMPSON
        else:
            raise ConfigError(f"policies: unknown policy {name!r}")
        return PolicySpec(
            kind=kind,
            horizon=self.horizon,
            expert_count=self.experts,
            klucb_c=self.klucb_c,
        )


_FIELD_NAMES = {f.name for f in dataclasses.fields(ExperimentConfig)}
_SEQUENCE_FIELDS = {"m_values", "policies"}


def parse_config(path: str | Path | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Resolve a config from an optional JSON file plus overrides (flags
    win over file values, file values win over defaults)."""
    values: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file: malformed JSON ({exc})") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file: top level must be an object")
        for key, val in raw.items():
            if key not in _FIELD_NAMES:
                raise ConfigError(f"config file: unknown field {key!r}")
            values[key] = val
    if overrides:
        for key, val in overrides.items():
            if key not in _FIELD_NAMES:
                raise ConfigError(f"override: unknown field {key!r}")
            if val is not None:
                values[key] = val
    for key in _SEQUENCE_FIELDS & values.keys():
        values[key] = tuple(values[key])
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
