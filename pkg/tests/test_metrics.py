import math

import numpy as np
import pytest

from bee.committees import committee_correct_prob, pseudo_competence_exact
from bee.engine import run_bee, run_fixed_committee
from bee.metrics import (
    _weighted_vote_accuracy_enum,
    _weighted_vote_accuracy_mc,
    fixed_committee_pseudo_regret,
    gaps,
    lemma_bound,
    oracle_committee_accuracy,
    oracle_committee_accuracy_exhaustive,
    potential,
    pseudo_regret_bee,
    pseudo_regret_bee_curve,
    pseudo_regret_swarm,
    realized_regret,
    realized_regret_curve,
)
from bee.policies import PolicyKind, PolicySpec
from bee.world import CompetenceProfile, WorldSeed, build_world

from oracles import weighted_vote_accuracy_enum

LEMMA_PROFILE = CompetenceProfile((0.75, 0.75, 0.75, 0.75, 0.7, 0.6))
LEMMA_COMMITTEE = (0, 1, 2)


def make_world(competences, seed=2024):
    return build_world(CompetenceProfile(tuple(competences)), WorldSeed(seed))


class TestRealizedRegret:
    def test_matches_manual_computation(self):
        comp = (0.85, 0.6, 0.6, 0.6)
        horizon = 2_000
        world = make_world(comp)
        spec = PolicySpec(kind=PolicyKind.UCB1)
        trace = run_bee(world, spec, 2, horizon)
        fresh = make_world(comp)
        x_star = fresh.opinion_column(0, horizon, trace.labels)
        expected = (x_star == trace.labels).mean() - (
            trace.decisions == trace.labels
        ).mean()
        got = realized_regret(trace, CompetenceProfile(comp), make_world(comp))
        assert got == pytest.approx(expected, abs=1e-15)

    def test_curve_final_point_equals_scalar(self):
        comp = (0.8, 0.6, 0.55, 0.7)
        world = make_world(comp, 3)
        spec = PolicySpec(kind=PolicyKind.IMED)
        trace = run_bee(world, spec, 2, 500)
        profile = CompetenceProfile(comp)
        curve = realized_regret_curve(trace, profile, make_world(comp, 3))
        scalar = realized_regret(trace, profile, make_world(comp, 3))
        assert curve[-1] == pytest.approx(scalar, abs=1e-12)
        assert len(curve) == 500

    def test_benchmark_independent_of_consultations(self):
        # the best expert's stream is sampled whether or not it was consulted,
        # so the benchmark accuracy approaches its true competence
        comp = (0.9, 0.6, 0.6, 0.6)
        horizon = 50_000
        world = make_world(comp, 10)
        spec = PolicySpec(kind=PolicyKind.UCB1)
        trace = run_bee(world, spec, 2, horizon)
        fresh = make_world(comp, 10)
        x_star = fresh.opinion_column(0, horizon, trace.labels)
        assert abs((x_star == trace.labels).mean() - 0.9) <= 0.005


class TestPseudoRegretBee:
    def test_hand_built_trace(self):
        from bee.engine import RunTrace

        profile = CompetenceProfile((0.8, 0.6))
        trace = RunTrace(
            mode="bee",
            policy=PolicySpec(kind=PolicyKind.UCB1),
            m=2,
            horizon=3,
            labels=np.array([1, 1, -1], np.int8),
            decisions=np.array([1, -1, -1], np.int8),
            leaders=np.array([-1, 0, 1], np.int32),
            committees=np.array([[-1, -1], [0, 1], [0, 1]], np.int16),
            consults=np.array([3, 3]),
            agreements=np.array([2, 1]),
        )
        # round 1 contributes the full-population vote correctness
        p_vote = committee_correct_prob([0.8, 0.6])
        expected = 0.8 - (p_vote + 0.8 + 0.6) / 3
        assert pseudo_regret_bee(trace, profile) == pytest.approx(expected, abs=1e-15)
        curve = pseudo_regret_bee_curve(trace, profile)
        assert curve[-1] == pytest.approx(expected, abs=1e-15)
        assert curve[0] == pytest.approx(0.8 - p_vote, abs=1e-15)

    def test_vanishes_when_best_leads(self):
        comp = (0.9, 0.55, 0.55, 0.55)
        horizon = 20_000
        world = make_world(comp, 6)
        spec = PolicySpec(kind=PolicyKind.KLUCB_PLUS)
        trace = run_bee(world, spec, 2, horizon)
        assert pseudo_regret_bee(trace, CompetenceProfile(comp)) <= 0.05


class TestOracleAccuracy:
    def test_pair_example(self):
        profile = CompetenceProfile((0.8, 0.6, 0.55))
        # weights 0.3 and 0.1 never tie, so the pair vote follows the
        # stronger member
        assert oracle_committee_accuracy(profile, 2) == pytest.approx(0.8, abs=1e-12)

    def test_equal_triple_is_majority(self):
        profile = CompetenceProfile((0.75, 0.75, 0.75))
        assert oracle_committee_accuracy(profile, 3) == pytest.approx(
            0.84375, abs=1e-12
        )

    def test_m_one_is_best_competence(self):
        profile = CompetenceProfile((0.7, 0.9, 0.8))
        assert oracle_committee_accuracy(profile, 1) == pytest.approx(0.9, abs=1e-15)

    def test_matches_enum_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            comp = rng.uniform(0.5, 0.95, 8)
            profile = CompetenceProfile(tuple(comp))
            m = int(rng.integers(2, 6))
            top = np.sort(np.argsort(-comp, kind="stable")[:m])
            ps = comp[np.argsort(-comp, kind="stable")[:m]]
            expected = weighted_vote_accuracy_enum(list(ps), list(ps - 0.5))
            assert oracle_committee_accuracy(profile, m) == pytest.approx(
                expected, abs=1e-12
            )

    def test_mc_agrees_with_enum(self):
        rng = np.random.default_rng(1)
        ps = rng.uniform(0.55, 0.9, 10)
        ws = ps - 0.5
        exact = _weighted_vote_accuracy_enum(ps, ws)
        mc = _weighted_vote_accuracy_mc(ps, ws, 2_000_000, np.random.default_rng(2))
        sigma = math.sqrt(exact * (1 - exact) / 2_000_000)
        assert abs(mc - exact) <= 4 * sigma

    def test_exhaustive_search_small_case(self):
        profile = CompetenceProfile((0.9, 0.6, 0.6, 0.55))
        val, comm = oracle_committee_accuracy_exhaustive(profile, 2)
        assert comm == (0, 1)
        assert val == pytest.approx(0.9, abs=1e-12)

    def test_m_bounds(self):
        with pytest.raises(ValueError):
            oracle_committee_accuracy(CompetenceProfile((0.6, 0.7)), 3)


class TestPseudoRegretSwarm:
    def test_manual_aggregation(self):
        from bee.engine import RunTrace

        profiles = [CompetenceProfile((0.8, 0.6)), CompetenceProfile((0.7, 0.65))]
        traces = []
        for k, profile in enumerate(profiles):
            correct = np.array([1, 1, -1, 1], np.int8)
            decisions = correct.copy()
            if k == 1:
                decisions[0] = -1  # one mistake in replication 2
            traces.append(
                RunTrace(
                    mode="swarm",
                    policy=PolicySpec(kind=PolicyKind.UCB1),
                    m=2,
                    horizon=4,
                    labels=correct,
                    decisions=decisions,
                    leaders=np.array([-1, 0, 0, 0], np.int32),
                    committees=np.zeros((4, 2), np.int16),
                    consults=np.array([4, 4]),
                    agreements=np.array([3, 2]),
                )
            )
        report = pseudo_regret_swarm(traces, profiles, 2)
        b0 = oracle_committee_accuracy(profiles[0], 2)
        b1 = oracle_committee_accuracy(profiles[1], 2)
        expected = ((b0 - 1.0) + (b1 - 0.75)) / 2
        assert report.normalized_pseudo == pytest.approx(expected, abs=1e-12)
        assert report.count == 2
        assert report.std > 0

    def test_requires_alignment(self):
        with pytest.raises(ValueError):
            pseudo_regret_swarm([], [], 2)


class TestLemmaBound:
    def test_potential_value(self):
        assert potential(LEMMA_PROFILE, LEMMA_COMMITTEE, 100_000) == pytest.approx(
            0.0030701134573253943, abs=1e-12
        )

    def test_ucb1_bound_value(self):
        assert lemma_bound(
            LEMMA_PROFILE, LEMMA_COMMITTEE, PolicyKind.UCB1, 100_000
        ) == pytest.approx(0.04465619574291482, abs=1e-12)

    def test_kl_family_is_twenty_times_tighter(self):
        ucb = lemma_bound(LEMMA_PROFILE, LEMMA_COMMITTEE, PolicyKind.UCB1, 100_000)
        for kind in (PolicyKind.KLUCB, PolicyKind.KLUCB_PLUS, PolicyKind.IMED):
            assert lemma_bound(
                LEMMA_PROFILE, LEMMA_COMMITTEE, kind, 100_000
            ) == pytest.approx(ucb / 20.0, abs=1e-15)

    def test_thompson_additive_term(self):
        phi = potential(LEMMA_PROFILE, LEMMA_COMMITTEE, 100_000)
        shrink = 2.0 * committee_correct_prob([0.75, 0.75, 0.75]) - 1.0
        eps = 0.2
        expected = (1 + eps) * phi / shrink + 6 / (eps**2 * 100_000)
        assert lemma_bound(
            LEMMA_PROFILE, LEMMA_COMMITTEE, PolicyKind.THOMPSON, 100_000
        ) == pytest.approx(expected, abs=1e-15)

    def test_moss_bound_finite_positive(self):
        val = lemma_bound(LEMMA_PROFILE, LEMMA_COMMITTEE, PolicyKind.MOSS, 100_000)
        assert 0.0 < val < 1.0

    def test_rejects_uninformative_committee(self):
        profile = CompetenceProfile((0.5, 0.5, 0.8))
        with pytest.raises(ValueError):
            lemma_bound(profile, (0, 1), PolicyKind.UCB1, 1000)

    def test_gaps(self):
        np.testing.assert_allclose(
            gaps(LEMMA_PROFILE), [0.0, 0.0, 0.0, 0.0, 0.05, 0.15]
        )


class TestFixedCommitteeRegret:
    def test_converges_under_klucb(self):
        world = build_world(LEMMA_PROFILE, WorldSeed(77))
        horizon = 20_000
        spec = PolicySpec(
            kind=PolicyKind.KLUCB_PLUS, horizon=horizon, expert_count=6
        )
        trace = run_fixed_committee(
            world, spec, LEMMA_COMMITTEE, (3, 4, 5), horizon
        )
        regret = fixed_committee_pseudo_regret(trace, LEMMA_PROFILE)
        assert 0.0 <= regret
        bound = lemma_bound(
            LEMMA_PROFILE, LEMMA_COMMITTEE, PolicyKind.KLUCB_PLUS, horizon
        )
        assert regret <= bound

    def test_pseudo_space_arithmetic(self):
        from bee.engine import FixedCommitteeTrace

        p_c = committee_correct_prob([0.75, 0.75, 0.75])
        trace = FixedCommitteeTrace(
            policy=PolicySpec(kind=PolicyKind.UCB1),
            committee=LEMMA_COMMITTEE,
            candidates=(3, 4, 5),
            horizon=4,
            leaders=np.array([0, 1, 2, 0], np.int32),
            consults=np.array([2, 1, 1]),
            agreements=np.array([2, 1, 0]),
        )
        pseudo = [
            pseudo_competence_exact(LEMMA_PROFILE.competences[i], p_c)
            for i in (3, 4, 5)
        ]
        expected = max(pseudo) - np.mean([pseudo[0], pseudo[1], pseudo[2], pseudo[0]])
        assert fixed_committee_pseudo_regret(trace, LEMMA_PROFILE) == pytest.approx(
            expected, abs=1e-15
        )
