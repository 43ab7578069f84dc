"""Politician best response to a fixed experiment.

The politician obeys at least one recommendation; on the other she mixes
with the probability that balances the quality gain against the
reputation loss, where the public's conjecture about her mixing tracks
the truth while its conjecture about the experiments stays fixed.  The
balance is a monotone fixed point solved by bisection; corner solutions
clamp into pure strategies, resolving exact indifference toward
obedience.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    BASELINE,
    BeliefBundle,
    Consequence,
    Experiment,
    Intent,
    InvalidParams,
    Lobbyist,
    Params,
    Persuasion,
    PoliticianStrategy,
    Rec,
    Regime,
    ReputationCurve,
    ReputationProfile,
    SolverError,
    decision_margin,
    linear_curve,
    posterior,
    quality_gain,
)
from .roots import bisect_increasing

_CAP = 1e6
_FEAS_TOL = 1e-10


@dataclass(frozen=True)
class BestResponse:
    """``p_star_raw`` is the unclamped mixing probability (of action a) on
    the randomizing recommendation; +/-inf when the balance never crosses
    zero (e.g. theta = 0 away from indifference).  ``strategy`` clamps it
    into [0, 1] with the non-randomizing recommendation obeyed.
    ``reputations`` are the public's ability posteriors implied by the
    clamped strategy."""

    p_star_raw: float
    strategy: PoliticianStrategy
    randomizing_on: Rec | None
    reputations: ReputationProfile


@dataclass(frozen=True)
class _Affine:
    """Low-type pooling masses as affine maps of the mixing probability p:
    P(low takes a | A) = alpha_a + beta_a * p,
    P(low takes b | B) = alpha_b - beta_b * p."""

    alpha_a: float
    beta_a: float
    alpha_b: float
    beta_b: float

    def reps(self, tau: float, p: float) -> tuple[float, float]:
        odds = (1.0 - tau) / tau
        ra = 1.0 / (1.0 + odds * (self.alpha_a + self.beta_a * p))
        rb = 1.0 / (1.0 + odds * (self.alpha_b - self.beta_b * p))
        return ra, rb


def _other_masses(beliefs: BeliefBundle, facing: Lobbyist, weight_other: float
                  ) -> tuple[float, float]:
    """Fixed contributions (c_a, c_b) of the non-faced type to the pools."""
    if weight_other == 0.0:
        return 0.0, 0.0
    for t, exp, strat in beliefs.present():
        if t is not facing:
            pa_A = exp.p_a_given_A * strat.p_after_a + exp.p_b_given_A * strat.p_after_b
            pa_B = exp.p_a_given_B * strat.p_after_a + exp.p_b_given_B * strat.p_after_b
            return weight_other * pa_A, weight_other * (1.0 - pa_B)
    raise InvalidParams(f"beliefs lack the type other than {facing}")


def _coeffs(exp: Experiment, rec: Rec, w: float, c_a: float, c_b: float,
            degenerate: bool) -> _Affine:
    if degenerate:
        # One effective posterior: the same mixing applies after both recs.
        return _Affine(alpha_a=c_a, beta_a=w, alpha_b=c_b + w, beta_b=w)
    if rec is Rec.A:
        return _Affine(alpha_a=c_a, beta_a=w * exp.p_a_given_A,
                       alpha_b=c_b + w, beta_b=w * exp.p_a_given_B)
    return _Affine(alpha_a=c_a + w * exp.p_a_given_A, beta_a=w * exp.p_b_given_A,
                   alpha_b=c_b + w * exp.p_b_given_B, beta_b=w * exp.p_b_given_B)


def _mixing_root(mu: float, tau: float, theta: float, curve: ReputationCurve,
                 co: _Affine) -> float:
    """Unclamped root of gain = loss in the mixing probability.

    The margin g(p) is strictly decreasing; when it never crosses zero the
    root is reported as +/-inf (the strict-preference corners).
    """
    odds = (1.0 - tau) / tau
    inf_scale = math.isinf(theta)

    def g(p: float) -> float:
        ra = 1.0 / (1.0 + odds * (co.alpha_a + co.beta_a * p))
        rb = 1.0 / (1.0 + odds * (co.alpha_b - co.beta_b * p))
        bracket = (1.0 - mu) * curve.value(rb) - mu * curve.value(ra)
        if inf_scale:
            return -bracket
        return quality_gain(mu) - theta * bracket

    g0, g1 = g(0.0), g(1.0)
    if g0 <= 0.0:
        if g0 == 0.0:
            return 0.0
        if co.beta_a > 0.0 and mu > 0.0:
            lo = -(1.0 / odds + co.alpha_a) / co.beta_a
            lo += 1e-14 * (0.0 - lo)
        else:
            lo = -_CAP
        if g(lo) <= 0.0:
            return -math.inf
        return bisect_increasing(lambda p: -g(p), lo, 0.0)
    if g1 >= 0.0:
        if g1 == 0.0:
            return 1.0
        if co.beta_b > 0.0 and mu < 1.0:
            hi = (co.alpha_b + 1.0 / odds) / co.beta_b
            hi -= 1e-14 * (hi - 1.0)
        else:
            hi = _CAP
        if g(hi) >= 0.0:
            return math.inf
        return bisect_increasing(lambda p: -g(p), 1.0, hi)
    return bisect_increasing(lambda p: -g(p), 0.0, 1.0)


def _clamp(p: float) -> float:
    return min(max(p, 0.0), 1.0)


def _setup(params: Params, exp: Experiment, regime: Regime,
           beliefs: BeliefBundle | None, facing: Lobbyist
           ) -> tuple[BeliefBundle, float, float, float]:
    if regime.consequence is not Consequence.REVEALED:
        raise InvalidParams("fixed-point response is defined for consequence-"
                            "revealed regimes; concealed-consequence equilibria "
                            "are solved in posterior space")
    if regime.persuasion is Persuasion.FULLY_PUBLIC:
        raise InvalidParams("use the public-persuasion module when "
                            "recommendations are published")
    if regime.intent is Intent.REVEALED:
        beliefs = beliefs or BeliefBundle(experiment_A=exp,
                                          strategy_A=PoliticianStrategy.obedient())
        w, c_a, c_b = 1.0, 0.0, 0.0
    else:
        if beliefs is None:
            raise InvalidParams("concealed intent needs a two-type belief bundle")
        w = params.gamma if facing is Lobbyist.A else 1.0 - params.gamma
        c_a, c_b = _other_masses(beliefs, facing, 1.0 - w)
    return beliefs, w, c_a, c_b


def solve_indifference(params: Params, exp: Experiment, rec: Rec, *,
                       regime: Regime = BASELINE,
                       curve: ReputationCurve | None = None,
                       beliefs: BeliefBundle | None = None,
                       facing: Lobbyist = Lobbyist.A) -> BestResponse:
    """Balance quality gain against reputation loss on one recommendation.

    The politician obeys the other recommendation; public beliefs about the
    experiments are taken from ``beliefs`` (defaulting to the actual
    experiment) and are NOT forced to be consistent here.  Degenerate
    experiments (both recommendations inducing the prior) fall back to a
    single-posterior fixed point where the same mixing applies after both.
    """
    curve = curve or linear_curve()
    beliefs, w, c_a, c_b = _setup(params, exp, regime, beliefs, facing)

    mu_a = posterior(params.mu0, exp, Rec.A)
    mu_b = posterior(params.mu0, exp, Rec.B)
    degenerate = mu_a is None or mu_b is None or mu_a == mu_b
    mu = params.mu0 if degenerate else (mu_a if rec is Rec.A else mu_b)
    co = _coeffs(exp, rec, w, c_a, c_b, degenerate)

    if params.theta == 0.0:
        gain = quality_gain(mu)
        if gain > 0.0:
            raw = math.inf
        elif gain < 0.0:
            raw = -math.inf
        else:
            # Indifferent at every p; resolve toward obedience.
            raw = 1.0 if rec is Rec.A else 0.0
    else:
        raw = _mixing_root(mu, params.tau, params.theta, curve, co)

    p_hat = _clamp(raw)
    if degenerate:
        strategy = PoliticianStrategy(p_after_a=p_hat, p_after_b=p_hat)
    elif rec is Rec.A:
        strategy = PoliticianStrategy(p_after_a=p_hat, p_after_b=0.0)
    else:
        strategy = PoliticianStrategy(p_after_a=1.0, p_after_b=p_hat)
    ra, rb = co.reps(params.tau, p_hat)
    return BestResponse(p_star_raw=raw, strategy=strategy,
                        randomizing_on=rec if 0.0 < p_hat < 1.0 else None,
                        reputations=ReputationProfile(rep_a=ra, rep_b=rb))


def politician_response(params: Params, exp: Experiment, *,
                        regime: Regime = BASELINE,
                        curve: ReputationCurve | None = None,
                        beliefs: BeliefBundle | None = None,
                        facing: Lobbyist = Lobbyist.A) -> BestResponse:
    """Equilibrium response to a fixed experiment.

    Tries obedience to rec_b with mixing on rec_a first, mirroring the case
    split of the one-recommendation dichotomy; if the implied reputations
    make obeying rec_b suboptimal, solves the mirrored case instead.
    """
    curve = curve or linear_curve()
    mu_a = posterior(params.mu0, exp, Rec.A)
    mu_b = posterior(params.mu0, exp, Rec.B)

    first = solve_indifference(params, exp, Rec.A, regime=regime, curve=curve,
                               beliefs=beliefs, facing=facing)
    if mu_a is None or mu_b is None or mu_a == mu_b:
        return first
    margin_b = decision_margin(mu_b, first.reputations, params.theta, curve)
    if margin_b <= _FEAS_TOL:
        return first

    second = solve_indifference(params, exp, Rec.B, regime=regime, curve=curve,
                                beliefs=beliefs, facing=facing)
    margin_a = decision_margin(mu_a, second.reputations, params.theta, curve)
    if margin_a >= -_FEAS_TOL:
        return second
    raise SolverError("no self-consistent obedience case found")


def mixing_theta_slope(params: Params, exp: Experiment, rec: Rec, *,
                       delta: float = 1e-4,
                       regime: Regime = BASELINE,
                       curve: ReputationCurve | None = None,
                       beliefs: BeliefBundle | None = None,
                       facing: Lobbyist = Lobbyist.A) -> float:
    """Finite-difference slope of the interior mixing probability in theta."""
    if math.isinf(params.theta):
        raise InvalidParams("slope in theta undefined at theta = inf")
    base = solve_indifference(params, exp, rec, regime=regime, curve=curve,
                              beliefs=beliefs, facing=facing)
    bumped_params = Params(mu0=params.mu0, tau=params.tau,
                           theta=params.theta + delta, gamma=params.gamma)
    bumped = solve_indifference(bumped_params, exp, rec, regime=regime,
                                curve=curve, beliefs=beliefs, facing=facing)
    if not (math.isfinite(base.p_star_raw) and math.isfinite(bumped.p_star_raw)):
        raise SolverError("theta slope needs finite mixing roots")
    return (bumped.p_star_raw - base.p_star_raw) / delta
