"""Sweep runner: (policy x m x replication) cells, deterministic CSVs."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .committees import committee_correct_prob
from .config import ExperimentConfig
from .engine import run_bee, run_fixed_committee, run_swarm
from .metrics import (
    fixed_committee_pseudo_regret,
    lemma_bound,
    oracle_committee_accuracy,
    potential,
    pseudo_regret_bee_curve,
    realized_regret_curve,
)
from .world import PROFILE_STREAM, CompetenceProfile, World, WorldSeed

SUMMARY_HEADER = (
    "mode,policy,m,replications,horizon,experts,realized_regret_mean,"
    "realized_regret_std,pseudo_regret_mean,pseudo_regret_std,baseline"
)
TRACE_HEADER = (
    "mode,policy,m,replication,round,leader,decision_correct,"
    "cum_realized_regret,cum_pseudo_regret"
)
LEMMA_HEADER = (
    "policy,committee_size,p_committee,horizon,phi,bound,empirical_pseudo_regret"
)

# Spawn-key prefixes keeping sweep and lemma randomness disjoint.
_SWEEP_DOMAIN = 10
_LEMMA_DOMAIN = 20


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def sweep_profile(config: ExperimentConfig, rep: int) -> CompetenceProfile:
    """Competences for one replication; redrawn per replication unless the
    profile is pinned."""
    r = 0 if config.fixed_profile else rep
    seq = np.random.SeedSequence(
        config.master_seed, spawn_key=(_SWEEP_DOMAIN, r, PROFILE_STREAM)
    )
    rng = np.random.Generator(np.random.Philox(seq))
    comps = rng.uniform(config.comp_low, config.comp_high, config.experts)
    return CompetenceProfile(tuple(comps))


def sweep_world(config: ExperimentConfig, rep: int, profile: CompetenceProfile) -> World:
    return World(profile, WorldSeed(config.master_seed, prefix=(_SWEEP_DOMAIN, rep)))


def checkpoint_rounds(horizon: int, count: int) -> np.ndarray:
    pts = np.unique(np.geomspace(1, horizon, num=count).astype(np.int64))
    if pts[-1] != horizon:
        pts = np.append(pts, horizon)
    return pts


def _run_cell(config: ExperimentConfig, policy: str, m: int, rep: int) -> dict:
    """One sweep cell; returns everything the aggregator needs."""
    profile = sweep_profile(config, rep)
    world = sweep_world(config, rep, profile)
    spec = config.policy_spec(policy)
    runner = run_swarm if config.mode == "swarm" else run_bee
    trace = runner(
        world, spec, m, config.horizon, oracle_rewards=config.oracle_rewards
    )
    if config.full_trace:
        rounds = np.arange(1, config.horizon + 1)
    else:
        rounds = checkpoint_rounds(config.horizon, config.trace_checkpoints)
    idx = rounds - 1

    realized_curve = realized_regret_curve(trace, profile, world)
    correct = trace.decision_correct.astype(np.int64)
    acc_curve = np.cumsum(correct) / np.arange(1, config.horizon + 1)
    out = {
        "policy": policy,
        "m": m,
        "rep": rep,
        "rounds": rounds,
        "leaders": trace.leaders[idx],
        "correct": correct[idx],
        "cum_realized": realized_curve[idx],
        "realized_final": float(realized_curve[-1]),
        "accuracy_final": float(acc_curve[-1]),
        "max_p": float(max(profile.competences)),
    }
    if config.mode == "swarm":
        out["cum_acc"] = acc_curve[idx]
    else:
        pseudo_curve = pseudo_regret_bee_curve(trace, profile)
        out["cum_pseudo"] = pseudo_curve[idx]
        out["pseudo_final"] = float(pseudo_curve[-1])
    return out


def _cell_entry(args):
    return _run_cell(*args)


def _mode_label(config: ExperimentConfig) -> str:
    return config.mode + ("-oracle" if config.oracle_rewards else "")


def run_experiment(config: ExperimentConfig) -> dict[str, Path]:
    """Full sweep; writes summary.csv and trace.csv into the output
    directory. Byte-deterministic for a fixed config and seed."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = [
        (config, policy, m, rep)
        for policy in config.policies
        for m in config.m_values
        for rep in range(config.replications)
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_cell_entry, cells, chunksize=1))
    else:
        results = [_run_cell(*cell) for cell in cells]
    by_key: dict[tuple[str, int], list[dict]] = {}
    for res in results:
        by_key.setdefault((res["policy"], res["m"]), []).append(res)

    mode = _mode_label(config)
    swarm = config.mode == "swarm"
    baselines: dict[tuple[int, int], float] = {}

    def swarm_baseline(rep: int, m: int) -> float:
        key = (0 if config.fixed_profile else rep, m)
        if key not in baselines:
            baselines[key] = oracle_committee_accuracy(sweep_profile(config, rep), m)
        return baselines[key]

    summary_rows = []
    trace_rows = []
    for policy in config.policies:
        for m in config.m_values:
            reps = sorted(by_key[(policy, m)], key=lambda r: r["rep"])
            realized = np.array([r["realized_final"] for r in reps])
            if swarm:
                base = np.array([swarm_baseline(r["rep"], m) for r in reps])
                pseudo = base - np.array([r["accuracy_final"] for r in reps])
                baseline_mean = float(base.mean())
            else:
                pseudo = np.array([r["pseudo_final"] for r in reps])
                baseline_mean = float(np.mean([r["max_p"] for r in reps]))
            nrep = len(reps)
            summary_rows.append(
                [
                    mode,
                    policy,
                    str(m),
                    str(nrep),
                    str(config.horizon),
                    str(config.experts),
                    _fmt(float(realized.mean())),
                    _fmt(float(realized.std(ddof=1)) if nrep > 1 else 0.0),
                    _fmt(float(pseudo.mean())),
                    _fmt(float(pseudo.std(ddof=1)) if nrep > 1 else 0.0),
                    _fmt(baseline_mean),
                ]
            )
            for r in reps:
                if swarm:
                    cum_pseudo = swarm_baseline(r["rep"], m) - r["cum_acc"]
                else:
                    cum_pseudo = r["cum_pseudo"]
                for k, rnd in enumerate(r["rounds"]):
                    trace_rows.append(
                        [
                            mode,
                            policy,
                            str(m),
                            str(r["rep"]),
                            str(int(rnd)),
                            str(int(r["leaders"][k])),
                            str(int(r["correct"][k])),
                            _fmt(float(r["cum_realized"][k])),
                            _fmt(float(cum_pseudo[k])),
                        ]
                    )

    summary_path = out_dir / "summary.csv"
    trace_path = out_dir / "trace.csv"
    _write_csv(summary_path, SUMMARY_HEADER, summary_rows)
    _write_csv(trace_path, TRACE_HEADER, trace_rows)
    return {"summary": summary_path, "trace": trace_path}


def lemma_profile(config: ExperimentConfig):
    """One pinned profile for the fixed-committee validation: a designated
    committee plus one gap-zero candidate and gap-drawn challengers."""
    k = config.lemma_committee_size
    n = config.lemma_candidates
    seq = np.random.SeedSequence(
        config.master_seed, spawn_key=(_LEMMA_DOMAIN, PROFILE_STREAM)
    )
    rng = np.random.Generator(np.random.Philox(seq))
    gaps = rng.uniform(config.lemma_gap_low, config.lemma_gap_high, n - 1)
    comps = (
        [config.lemma_committee_comp] * k
        + [config.lemma_best_comp]
        + list(config.lemma_best_comp - gaps)
    )
    profile = CompetenceProfile(tuple(comps))
    committee = tuple(range(k))
    candidates = tuple(range(k, k + n))
    return profile, committee, candidates


def run_lemma_validation(config: ExperimentConfig) -> dict[str, Path]:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    profile, committee, candidates = lemma_profile(config)
    comp = profile.as_array()
    p_c = committee_correct_prob([comp[i] for i in committee])
    if p_c <= 0.5:
        raise ValueError(f"committee correctness {p_c} is not above 1/2")
    phi = potential(profile, committee, config.horizon)
    rows = []
    for policy in config.policies:
        spec = config.policy_spec(policy)
        vals = []
        for rep in range(config.replications):
            world = World(
                profile, WorldSeed(config.master_seed, prefix=(_LEMMA_DOMAIN, rep))
            )
            trace = run_fixed_committee(
                world, spec, committee, candidates, config.horizon
            )
            vals.append(fixed_committee_pseudo_regret(trace, profile))
        bound = lemma_bound(
            profile,
            committee,
            spec.kind,
            config.horizon,
            thompson_epsilon=config.thompson_epsilon,
        )
        rows.append(
            [
                policy,
                str(config.lemma_committee_size),
                _fmt(p_c),
                str(config.horizon),
                _fmt(phi),
                _fmt(bound),
                _fmt(float(np.mean(vals))),
            ]
        )
    path = out_dir / "lemma.csv"
    _write_csv(path, LEMMA_HEADER, rows)
    return {"lemma": path}


def _write_csv(path: Path, header: str, rows: list[list[str]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header.split(","))
        writer.writerows(rows)
