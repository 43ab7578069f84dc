import math

import numpy as np
import pytest

import lobbylab as lab
from lobbylab import (
    BASELINE,
    CONCEALED_CONSEQUENCE,
    CONCEALED_INTENT,
    FULLY_PUBLIC,
    BeliefBundle,
    Experiment,
    InvalidParams,
    Lobbyist,
    Params,
    PoliticianStrategy,
    Rec,
    ReputationProfile,
)
from tests.conftest import draw_params

EXAMPLE = Params(mu0=1 / 3, tau=0.5, theta=math.inf, gamma=8 / 9)
EXAMPLE_EXP = Experiment(p_a_given_A=1.0, p_a_given_B=3 / 7)  # P(rec_b|B) = 4/7


class TestPosterior:
    def test_uninformative_returns_prior(self):
        exp = Experiment(1.0, 1.0)
        assert lab.posterior(1 / 3, exp, Rec.A) == pytest.approx(1 / 3, abs=1e-15)

    def test_example_posterior_is_7_13(self):
        assert lab.posterior(1 / 3, EXAMPLE_EXP, Rec.A) == pytest.approx(
            7 / 13, abs=1e-15)

    def test_revealing_side_posterior_is_zero(self):
        assert lab.posterior(1 / 3, EXAMPLE_EXP, Rec.B) == 0.0

    def test_zero_mass_recommendation_is_undefined(self):
        assert lab.posterior(1 / 3, Experiment(1.0, 1.0), Rec.B) is None

    def test_bayes_plausibility(self, rng):
        for _ in range(300):
            prior = rng.uniform(0.05, 0.95)
            exp = Experiment(rng.uniform(0, 1), rng.uniform(0, 1))
            mix = 0.0
            for rec in (Rec.A, Rec.B):
                mass = exp.marginal(prior, rec)
                if mass > 0:
                    mix += mass * lab.posterior(prior, exp, rec)
            assert mix == pytest.approx(prior, abs=1e-12)


class TestQualityGain:
    def test_indifference_point(self):
        assert lab.quality_gain(0.5) == 0.0

    def test_example_posterior(self):
        assert lab.quality_gain(7 / 13) == pytest.approx(1 / 13, abs=1e-15)

    def test_certain_b(self):
        assert lab.quality_gain(0.0) == -1.0

    def test_odd_around_half(self, rng):
        for _ in range(100):
            m = rng.uniform(0, 0.5)
            assert lab.quality_gain(0.5 + m) == pytest.approx(
                -lab.quality_gain(0.5 - m), abs=1e-12)


class TestExperiment:
    def test_canonicalisation_swaps_labels(self):
        exp = Experiment(p_a_given_A=0.2, p_a_given_B=0.9)
        assert exp.p_a_given_A == pytest.approx(0.8)
        assert exp.p_a_given_B == pytest.approx(0.1)

    def test_canonical_invariant(self, rng):
        for _ in range(200):
            exp = Experiment(rng.uniform(0, 1), rng.uniform(0, 1))
            assert exp.p_a_given_A >= exp.p_a_given_B

    def test_probability_slack(self):
        exp = Experiment(1.0 + 1e-13, -1e-13)
        assert exp.p_a_given_A == 1.0 and exp.p_a_given_B == 0.0
        with pytest.raises(InvalidParams):
            Experiment(1.5, 0.0)

    def test_from_informative_posterior_round_trip(self, rng):
        for _ in range(100):
            prior = rng.uniform(0.05, 0.45)
            mu = rng.uniform(prior, 1.0)
            exp = Experiment.from_informative_posterior(prior, mu)
            assert lab.posterior(prior, exp, Rec.A) == pytest.approx(mu, abs=1e-12)


class TestParams:
    @pytest.mark.parametrize("kwargs", [
        dict(mu0=0.5, tau=0.5, theta=1.0),
        dict(mu0=0.0, tau=0.5, theta=1.0),
        dict(mu0=0.3, tau=0.0, theta=1.0),
        dict(mu0=0.3, tau=1.0, theta=1.0),
        dict(mu0=0.3, tau=0.5, theta=-1.0),
        dict(mu0=0.3, tau=0.5, theta=math.nan),
        dict(mu0=0.3, tau=0.5, theta=1.0, gamma=0.0),
    ])
    def test_rejects_out_of_range(self, kwargs):
        with pytest.raises(InvalidParams):
            Params(**kwargs)

    def test_accepts_infinite_theta(self):
        assert math.isinf(Params(mu0=0.3, tau=0.5, theta=math.inf).theta)


def _example_bundle() -> BeliefBundle:
    return BeliefBundle(
        experiment_A=EXAMPLE_EXP,
        strategy_A=PoliticianStrategy(p_after_a=8 / 9, p_after_b=0.0),
    )


class TestReputation:
    def test_obedient_fully_pooling_gives_tau(self):
        params = Params(mu0=1 / 3, tau=0.5, theta=1.0)
        bundle = BeliefBundle(experiment_A=Experiment(1.0, 0.3),
                              strategy_A=PoliticianStrategy.obedient())
        reps = lab.reputation_profile(params, BASELINE, bundle,
                                      facing=Lobbyist.A)
        assert reps.rep_a == pytest.approx(0.5, abs=1e-15)

    def test_example_mixing_reputations(self):
        # Direct substitution of the mixing response into the action+state
        # Bayes update: 9/17 after (a, A) and 21/34 after (b, B).
        reps = lab.reputation_profile(EXAMPLE, BASELINE, _example_bundle(),
                                      facing=Lobbyist.A)
        assert reps.rep_a == pytest.approx(9 / 17, abs=1e-12)
        assert reps.rep_b == pytest.approx(21 / 34, abs=1e-12)

    def test_concealed_intent_pooled_reputations(self):
        bundle = BeliefBundle(
            experiment_A=EXAMPLE_EXP,
            strategy_A=PoliticianStrategy.obedient(),
            experiment_B=Experiment.uninformative_always_b(),
            strategy_B=PoliticianStrategy.obedient(),
        )
        reps = lab.reputation_profile(EXAMPLE, CONCEALED_INTENT, bundle)
        assert reps.rep_b == pytest.approx(21 / 34, abs=1e-12)
        assert reps.rep_a == pytest.approx(9 / 17, abs=1e-12)

    def test_zero_probability_correct_cell_attributed_to_high_type(self):
        params = Params(mu0=1 / 3, tau=0.5, theta=1.0)
        bundle = BeliefBundle(experiment_A=Experiment(1.0, 0.3),
                              strategy_A=PoliticianStrategy(0.0, 0.0))
        reps = lab.reputation_profile(params, BASELINE, bundle,
                                      facing=Lobbyist.A)
        assert reps.rep_a == 1.0

    def test_consequence_concealed_matches_closed_form(self, rng):
        for _ in range(50):
            params = draw_params(rng)
            mu = rng.uniform(params.mu0 + 0.01, 0.99)
            exp = Experiment.from_informative_posterior(params.mu0, mu)
            bundle = BeliefBundle(experiment_A=exp,
                                  strategy_A=PoliticianStrategy.obedient())
            reps = lab.reputation_profile(params, CONCEALED_CONSEQUENCE,
                                          bundle, facing=Lobbyist.A)
            tau = params.tau
            assert reps.rep_a == pytest.approx(
                tau / (tau + (1 - tau) / mu), abs=1e-12)
            assert reps.rep_b == pytest.approx(
                tau / (tau + (1 - tau) * exp.p_b_given_B), abs=1e-12)

    def test_fully_public_matches_closed_form(self, rng):
        for _ in range(50):
            params = draw_params(rng)
            p = rng.uniform(0.05, 0.95)
            exp = Experiment(1.0, rng.uniform(0.0, 1.0))
            bundle = BeliefBundle(experiment_A=exp,
                                  strategy_A=PoliticianStrategy(p, 0.0))
            reps = lab.reputation_profile(params, FULLY_PUBLIC, bundle,
                                          facing=Lobbyist.A, rec=Rec.A)
            tau = params.tau
            assert reps.rep_a == pytest.approx(
                tau / (tau + (1 - tau) * p), abs=1e-12)
            assert reps.rep_b == pytest.approx(
                tau / (tau + (1 - tau) * (1 - p)), abs=1e-12)

    def test_reputations_at_least_tau_on_consistent_bundles(self, rng):
        for _ in range(100):
            params = draw_params(rng)
            bundle = BeliefBundle(
                experiment_A=Experiment(rng.uniform(0, 1), rng.uniform(0, 1)),
                strategy_A=PoliticianStrategy(rng.uniform(0, 1),
                                              rng.uniform(0, 1)))
            reps = lab.reputation_profile(params, BASELINE, bundle,
                                          facing=Lobbyist.A)
            assert reps.rep_a >= params.tau - 1e-12
            assert reps.rep_b >= params.tau - 1e-12
            assert reps.rep_a <= 1.0 and reps.rep_b <= 1.0


class TestReputationLoss:
    def test_symmetric_point_is_zero(self):
        params = Params(mu0=0.3, tau=0.5, theta=2.0)
        reps = ReputationProfile(rep_a=0.6, rep_b=0.6)
        assert lab.reputation_loss(params, 0.5, reps).value == 0.0

    def test_example_bracket_vanishes_at_mixing_point(self):
        reps = ReputationProfile(rep_a=9 / 17, rep_b=21 / 34)
        loss = lab.reputation_loss(EXAMPLE, 7 / 13, reps)
        assert loss.infinite_scale
        assert loss.bracket == pytest.approx(0.0, abs=1e-15)
        assert loss.value == 0.0

    def test_no_career_concerns_no_loss(self):
        params = Params(mu0=0.3, tau=0.5, theta=0.0)
        reps = ReputationProfile(rep_a=0.9, rep_b=0.4)
        assert lab.reputation_loss(params, 0.7, reps).value == 0.0

    def test_monotone_decreasing_in_mu(self, rng):
        for _ in range(50):
            params = draw_params(rng)
            if math.isinf(params.theta):
                continue
            reps = ReputationProfile(rep_a=rng.uniform(0.2, 1.0),
                                     rep_b=rng.uniform(0.2, 1.0))
            mus = np.sort(rng.uniform(0, 1, size=5))
            vals = [lab.reputation_loss(params, m, reps).value for m in mus]
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


class TestLobbyistPayoff:
    def test_uninformative_with_obedience_is_certain(self):
        params = Params(mu0=0.3, tau=0.5, theta=1.0)
        exp = Experiment.uninformative_always_a()
        strat = PoliticianStrategy(p_after_a=1.0, p_after_b=0.0)
        assert lab.lobbyist_payoff(params, exp, strat) == 1.0

    def test_obedient_informative_payoff(self):
        params = Params(mu0=1 / 3, tau=0.5, theta=1.0)
        strat = PoliticianStrategy.obedient()
        assert lab.lobbyist_payoff(params, EXAMPLE_EXP, strat) == pytest.approx(
            13 / 21, abs=1e-12)

    def test_never_a_pays_zero(self):
        params = Params(mu0=1 / 3, tau=0.5, theta=1.0)
        strat = PoliticianStrategy(p_after_a=0.0, p_after_b=0.0)
        assert lab.lobbyist_payoff(params, EXAMPLE_EXP, strat) == 0.0

    def test_monotone_in_strategy_toward_preferred(self, rng):
        for _ in range(50):
            params = draw_params(rng)
            exp = Experiment(rng.uniform(0, 1), rng.uniform(0, 1))
            pa, pb = rng.uniform(0, 1, size=2)
            bump = rng.uniform(0, 1.0 - pa)
            lo = lab.lobbyist_payoff(params, exp, PoliticianStrategy(pa, pb))
            hi = lab.lobbyist_payoff(params, exp,
                                     PoliticianStrategy(pa + bump, pb))
            assert hi >= lo - 1e-12


class TestWelfare:
    def test_fully_revealing_obedient_is_perfect(self):
        params = Params(mu0=0.3, tau=0.5, theta=1.0)
        bundle = BeliefBundle(experiment_A=Experiment.fully_revealing(),
                              strategy_A=PoliticianStrategy.obedient())
        assert lab.welfare(params, bundle) == pytest.approx(1.0, abs=1e-12)

    def test_no_concern_benchmark_value(self):
        # mu* = 1/2 experiment at mu0 = 1/3 implies P(rec_b|B) = 1/2 and
        # welfare 1/2 + 1/2 * (1/3 + 2/3 * 1/2) = 5/6.
        params = Params(mu0=1 / 3, tau=0.5, theta=0.0)
        exp = Experiment.from_informative_posterior(1 / 3, 0.5)
        bundle = BeliefBundle(experiment_A=exp,
                              strategy_A=PoliticianStrategy.obedient())
        assert lab.welfare(params, bundle) == pytest.approx(5 / 6, abs=1e-12)

    def test_always_a_uninformative(self):
        params = Params(mu0=1 / 3, tau=0.5, theta=1.0)
        bundle = BeliefBundle(experiment_A=Experiment.uninformative_always_a(),
                              strategy_A=PoliticianStrategy(1.0, 1.0))
        assert lab.welfare(params, bundle) == pytest.approx(2 / 3, abs=1e-12)


class TestReputationCurve:
    def test_linear_curve(self):
        curve = lab.linear_curve()
        assert curve.value(0.37) == 0.37
        assert curve.derivative(0.2) == 1.0

    def test_table_curve_interpolates(self):
        curve = lab.curve_from_table([0.0, 0.5, 1.0], [0.0, 0.7, 1.0])
        assert curve.value(0.25) == pytest.approx(0.35)

    def test_rejects_bad_curves(self):
        with pytest.raises(InvalidParams):
            lab.curve_from_table([0.0, 0.5, 1.0], [0.0, 0.8, 0.7])
        with pytest.raises(InvalidParams):
            lab.curve_from_table([0.0, 1.0], [0.1, 1.0])

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "curve.txt"
        path.write_text("0.0 0.0\n0.5 0.6\n1.0 1.0\n")
        curve = lab.curve_from_file(path)
        assert curve.value(0.5) == pytest.approx(0.6)

    def test_extension_above_one_is_monotone(self):
        curve = lab.curve_from_callable(np.sqrt)
        assert curve.value(1.5) > curve.value(1.0) == pytest.approx(1.0)
