"""Hidden task process and stochastic expert opinions.

The world draws i.i.d. uniform binary labels and, for each expert i, an
opinion that matches the label with probability p_i, conditionally
independently across experts. Every random quantity is indexed by a
counter-based (Philox) substream keyed off a single master seed, so the
opinion of expert i on round t is a pure function of (master_seed, i, t).
Consequently the trajectory never depends on which experts a policy chose
to consult, and independent replications use disjoint substreams.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Substream domains under the master seed.
LABELS_STREAM = 0
EXPERT_STREAM = 1
TIEBREAK_STREAM = 2
POLICY_STREAM = 3
PROFILE_STREAM = 4

_CHUNK = 4096


@dataclass(frozen=True)
class CompetenceProfile:
    """Ground-truth expert reliabilities, hidden from policies."""

    competences: tuple[float, ...]

    def __post_init__(self):
        if len(self.competences) < 2:
            raise ValueError("profile needs at least 2 experts")
        for p in self.competences:
            if not 0.0 < p < 1.0:
                raise ValueError(f"competence {p} outside (0, 1)")

    @property
    def expert_count(self) -> int:
        return len(self.competences)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.competences, dtype=np.float64)


def best_expert(profile: CompetenceProfile) -> int:
    """Index of the most competent expert; ties go to the lowest index."""
    best, best_p = 0, profile.competences[0]
    for i, p in enumerate(profile.competences):
        if p > best_p:
            best, best_p = i, p
    return best


@dataclass(frozen=True)
class WorldSeed:
    """Master seed plus a spawn-key prefix isolating e.g. replications."""

    master_seed: int
    prefix: tuple[int, ...] = ()

    def seq(self, *key: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.master_seed, spawn_key=self.prefix + key)


@dataclass
class TaskRecord:
    """One round: hidden label, consulted committee, opinions, correctness."""

    round: int
    label: int
    committee: tuple[int, ...]
    opinions: dict[int, int]
    correctness: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.correctness:
            self.correctness = {
                i: int(x == self.label) for i, x in self.opinions.items()
            }


class _CounterStream:
    """Position-addressable uniforms over a Philox stream, cached per chunk."""

    def __init__(self, seq: np.random.SeedSequence):
        self._seq = seq
        self._chunk_id = -1
        self._buf: np.ndarray | None = None

    def block(self, start: int, n: int) -> np.ndarray:
        bg = np.random.Philox(self._seq)
        bg.advance(start)
        return np.random.Generator(bg).random(n)

    def uniform(self, pos: int) -> float:
        cid, off = divmod(pos, _CHUNK)
        if cid != self._chunk_id:
            self._buf = self.block(cid * _CHUNK, _CHUNK)
            self._chunk_id = cid
        return float(self._buf[off])


class World:
    """Stateful task/opinion generator with oracle views for metrics."""

    def __init__(self, profile: CompetenceProfile, seed: WorldSeed):
        self.profile = profile
        self.seed = seed
        m = profile.expert_count
        self._labels = _CounterStream(seed.seq(LABELS_STREAM))
        self._experts = [
            _CounterStream(seed.seq(EXPERT_STREAM, i)) for i in range(m)
        ]
        self._round = 0
        self._tiebreak_rng: np.random.Generator | None = None

    @property
    def expert_count(self) -> int:
        return self.profile.expert_count

    # -- oracle / counter-addressed views ----------------------------------

    def label(self, t: int) -> int:
        if t < 1:
            raise ValueError("rounds are 1-based")
        return 1 if self._labels.uniform(t - 1) < 0.5 else -1

    def opinion(self, i: int, t: int, label: int | None = None) -> int:
        if not 0 <= i < self.expert_count:
            raise IndexError(f"expert index {i} out of range")
        if label is None:
            label = self.label(t)
        u = self._experts[i].uniform(t - 1)
        return label if u < self.profile.competences[i] else -label

    def labels_block(self, horizon: int) -> np.ndarray:
        u = self._labels.block(0, horizon)
        return np.where(u < 0.5, 1, -1).astype(np.int8)

    def opinions_matrix(self, horizon: int) -> np.ndarray:
        """Opinions of all experts for rounds 1..horizon, shape (T, M)."""
        labels = self.labels_block(horizon)
        out = np.empty((horizon, self.expert_count), dtype=np.int8)
        for i, p in enumerate(self.profile.competences):
            u = self._experts[i].block(0, horizon)
            out[:, i] = np.where(u < p, labels, -labels)
        return out

    def opinion_column(self, i: int, horizon: int, labels: np.ndarray) -> np.ndarray:
        u = self._experts[i].block(0, horizon)
        return np.where(u < self.profile.competences[i], labels, -labels).astype(np.int8)

    # -- tie-break / policy randomness -------------------------------------

    def tiebreak_pool(self, n: int) -> np.ndarray:
        return _CounterStream(self.seed.seq(TIEBREAK_STREAM)).block(0, n)

    @property
    def tiebreak_rng(self) -> np.random.Generator:
        if self._tiebreak_rng is None:
            self._tiebreak_rng = np.random.Generator(
                np.random.Philox(self.seed.seq(TIEBREAK_STREAM))
            )
        return self._tiebreak_rng

    def policy_seed(self) -> int:
        return int(self.seed.seq(POLICY_STREAM).generate_state(1)[0])

    # -- sequential sampling ------------------------------------------------

    def sample_round(self, committee) -> TaskRecord:
        committee = tuple(committee)
        if not committee:
            raise ValueError("committee must be non-empty")
        for i in committee:
            if not 0 <= i < self.expert_count:
                raise IndexError(f"expert index {i} out of range")
        self._round += 1
        t = self._round
        label = self.label(t)
        opinions = {i: self.opinion(i, t, label) for i in committee}
        return TaskRecord(round=t, label=label, committee=committee, opinions=opinions)


def build_world(profile: CompetenceProfile, seed: WorldSeed) -> World:
    return World(profile, seed)


def sample_round(world: World, committee) -> TaskRecord:
    return world.sample_round(committee)
