"""Lobbyist-optimal experiments and full equilibria per transparency regime.

Each regime's defining equation is solved in posterior space (the
posterior at the informative recommendation), where monotonicity makes
bisection safe; the experiment is recovered by Bayes' rule afterwards.
Indifference equations of the form gain = theta * bracket are solved in
the rearranged form gain / theta = bracket so that theta = inf reduces to
the bracket's root, with theta = 0 short-circuited to exact answers.

The lobbyist-B problems are solved through the explicit relabeling
(states, actions and recommendations swapped; prior and type weight
complemented) so a single code path serves both types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .model import (
    BASELINE,
    CONCEALED_BOTH,
    CONCEALED_CONSEQUENCE,
    CONCEALED_INTENT,
    AssumptionViolated,
    BeliefBundle,
    Consequence,
    EquilibriumOutcome,
    Experiment,
    Intent,
    InvalidParams,
    Lobbyist,
    Params,
    Persuasion,
    PoliticianStrategy,
    Regime,
    ReputationCurve,
    ReputationProfile,
    SolverError,
    linear_curve,
    quality_gain,
)
from .roots import bisect_increasing

CLUB_BINDING_TOL = 1e-12


class CaseLabel(Enum):
    BASELINE = "baseline"
    A_INFORMS = "a_informs"
    B_INFORMS = "b_informs"
    NEITHER_INFORMS = "neither_informs"


@dataclass(frozen=True)
class RegimeEquilibrium:
    regime: Regime
    case_label: CaseLabel
    outcome: EquilibriumOutcome
    defining_residual: float


def _inv_theta(theta: float) -> float:
    return 0.0 if math.isinf(theta) else 1.0 / theta


def _rec_b_given_B(prior: float, mu: float) -> float:
    """P(rec_b | B) for a type-A experiment with p_a_given_A = 1 inducing mu."""
    return 1.0 - prior * (1.0 - mu) / ((1.0 - prior) * mu)


@dataclass(frozen=True)
class _MuSolution:
    mu: float
    residual: float
    informative: bool


def _solve_mu(prior: float, theta: float, bracket, *, xtol: float = 5e-14
              ) -> _MuSolution:
    """Root of (2mu-1)/theta = bracket(mu) over (prior, 1].

    ``bracket`` must be strictly decreasing so the rearranged residual is
    increasing.  A nonnegative residual already at the prior means the
    politician obeys an uninformative experiment and no information is
    provided.
    """
    if theta == 0.0:
        if prior >= 0.5:
            return _MuSolution(mu=prior, residual=0.0, informative=False)
        return _MuSolution(mu=0.5, residual=0.0, informative=True)
    k = _inv_theta(theta)

    def residual(mu: float) -> float:
        return quality_gain(mu) * k - bracket(mu)

    r0 = residual(prior)
    if r0 >= 0.0:
        return _MuSolution(mu=prior, residual=0.0, informative=False)
    r1 = residual(1.0)
    if r1 < 0.0:
        raise SolverError("defining equation has no root on (prior, 1]")
    if r1 == 0.0:
        return _MuSolution(mu=1.0, residual=0.0, informative=True)
    mu = bisect_increasing(residual, prior, 1.0, xtol=xtol)
    return _MuSolution(mu=mu, residual=abs(residual(mu)), informative=True)


# ---------------------------------------------------------------------------
# Baseline: intent revealed, consequence revealed, private persuasion.
# ---------------------------------------------------------------------------

def _baseline_bracket(prior: float, tau: float, curve: ReputationCurve):
    f_tau = curve.value(tau)

    def bracket(mu: float) -> float:
        x = _rec_b_given_B(prior, mu)
        rep_b = tau / (tau + (1.0 - tau) * x)
        return (1.0 - mu) * curve.value(rep_b) - mu * f_tau

    return bracket


def _one_sided_baseline(prior: float, tau: float, theta: float,
                        curve: ReputationCurve) -> _MuSolution:
    return _solve_mu(prior, theta, _baseline_bracket(prior, tau, curve))


def solve_baseline(params: Params, *, curve: ReputationCurve | None = None
                   ) -> RegimeEquilibrium:
    """Single lobbyist preferring a, everything about him public.

    The equilibrium experiment reveals state B outright and pools just
    enough on the recommendation for a to keep the politician willing to
    obey; the induced posterior strictly exceeds 1/2 whenever theta > 0.
    """
    curve = curve or linear_curve()
    sol = _one_sided_baseline(params.mu0, params.tau, params.theta, curve)
    exp = Experiment.from_informative_posterior(params.mu0, sol.mu)
    strat = PoliticianStrategy.obedient()
    tau = params.tau
    reps = ReputationProfile(
        rep_a=tau,
        rep_b=tau / (tau + (1.0 - tau) * exp.p_b_given_B),
    )
    outcome = EquilibriumOutcome(
        experiment_A=exp, experiment_B=None,
        strategy_A=strat, strategy_B=None,
        posterior_a=sol.mu,
        reputations=reps,
        welfare=params.tau + (1.0 - params.tau)
        * (params.mu0 + (1.0 - params.mu0) * exp.p_b_given_B),
        payoff_A=params.mu0 + (1.0 - params.mu0) * exp.p_a_given_B,
        payoff_B=None,
    )
    return RegimeEquilibrium(regime=BASELINE, case_label=CaseLabel.BASELINE,
                             outcome=outcome, defining_residual=sol.residual)


# ---------------------------------------------------------------------------
# Concealed intent, consequence revealed.
# ---------------------------------------------------------------------------

def check_condition_club(params: Params) -> float:
    """Sign classifier for who informs when intent is concealed.

    Returns the (theta-scaled) difference between the quality gain and the
    reputation loss at the prior when neither type informs and the
    politician is believed to follow each type's implicit recommendation.
    Negative: lobbyist-A must inform.  Positive: lobbyist-B must.  Zero
    within tolerance: neither informs.
    """
    mu0, tau, gamma = params.mu0, params.tau, params.gamma
    bracket = ((1.0 - mu0) * tau / (tau + (1.0 - tau) * (1.0 - gamma))
               - mu0 * tau / (tau + (1.0 - tau) * gamma))
    if math.isinf(params.theta):
        return -bracket
    return quality_gain(mu0) - params.theta * bracket


def classify_concealed_intent(params: Params, *, tol: float = CLUB_BINDING_TOL
                              ) -> CaseLabel:
    value = check_condition_club(params)
    if abs(value) <= tol:
        return CaseLabel.NEITHER_INFORMS
    return CaseLabel.A_INFORMS if value < 0.0 else CaseLabel.B_INFORMS


def _concealed_bracket(prior: float, tau: float, gamma: float,
                       curve: ReputationCurve):
    """Gain/loss bracket when the informing type plays (1, x(mu)) and the
    other type reveals nothing; reputations pool over types."""
    rep_a = tau / (tau + (1.0 - tau) * gamma)
    f_rep_a = curve.value(rep_a)

    def bracket(mu: float) -> float:
        x = _rec_b_given_B(prior, mu)
        rep_b = tau / (tau + (1.0 - tau) * (gamma * x + 1.0 - gamma))
        return (1.0 - mu) * curve.value(rep_b) - mu * f_rep_a

    return bracket


def _solve_concealed_core(prior: float, tau: float, theta: float, gamma: float,
                          curve: ReputationCurve) -> _MuSolution:
    return _solve_mu(prior, theta, _concealed_bracket(prior, tau, gamma, curve))


def concealed_intent_residual(params: Params, experiment: Experiment, *,
                              curve: ReputationCurve | None = None) -> float:
    """Residual of the concealed-intent defining equation at a candidate
    type-A experiment (its partner held uninformative), in the rearranged
    gain/theta = bracket form so theta = inf reduces to the bracket."""
    curve = curve or linear_curve()
    if experiment.p_a_given_A != 1.0:
        raise InvalidParams("candidate must reveal state B outright "
                            "(p_a_given_A = 1)")
    mu = params.mu0 / (params.mu0 + (1.0 - params.mu0) * experiment.p_a_given_B)
    bracket = _concealed_bracket(params.mu0, params.tau, params.gamma, curve)
    if params.theta == 0.0:
        return abs(quality_gain(mu))
    return abs(quality_gain(mu) * _inv_theta(params.theta) - bracket(mu))


def mirror_experiment(exp: Experiment) -> Experiment:
    """Relabel states and recommendations simultaneously (A<->B, rec_a<->rec_b)."""
    return Experiment(p_a_given_A=1.0 - exp.p_a_given_B,
                      p_a_given_B=1.0 - exp.p_a_given_A)


def solve_concealed_intent(params: Params, *, curve: ReputationCurve | None = None
                           ) -> RegimeEquilibrium:
    """Two lobbyist types, the public unsure which one showed up.

    Classification decides which type informs; the informing side's
    defining equation is solved directly (type A) or through the
    state/action relabeling (type B).  On the binding knife edge both
    experiments are uninformative and the politician follows each type's
    implicit recommendation.
    """
    curve = curve or linear_curve()
    label = classify_concealed_intent(params)
    mu0, tau, theta, gamma = params.mu0, params.tau, params.theta, params.gamma
    regime = CONCEALED_INTENT

    if label is CaseLabel.NEITHER_INFORMS:
        reps = ReputationProfile(
            rep_a=tau / (tau + (1.0 - tau) * gamma),
            rep_b=tau / (tau + (1.0 - tau) * (1.0 - gamma)),
        )
        outcome = EquilibriumOutcome(
            experiment_A=Experiment.uninformative_always_a(),
            experiment_B=Experiment.uninformative_always_b(),
            strategy_A=PoliticianStrategy.obedient(),
            strategy_B=PoliticianStrategy.obedient(),
            posterior_a=math.nan,
            reputations=reps,
            welfare=tau + (1.0 - tau) * (gamma * mu0 + (1.0 - gamma) * (1.0 - mu0)),
            payoff_A=1.0,
            payoff_B=1.0,
        )
        return RegimeEquilibrium(regime=regime, case_label=label, outcome=outcome,
                                 defining_residual=abs(check_condition_club(params)))

    if label is CaseLabel.A_INFORMS:
        sol = _solve_concealed_core(mu0, tau, theta, gamma, curve)
        exp_a = Experiment.from_informative_posterior(mu0, sol.mu)
        x = exp_a.p_b_given_B
        reps = ReputationProfile(
            rep_a=tau / (tau + (1.0 - tau) * gamma),
            rep_b=tau / (tau + (1.0 - tau) * (gamma * x + 1.0 - gamma)),
        )
        outcome = EquilibriumOutcome(
            experiment_A=exp_a,
            experiment_B=Experiment.uninformative_always_b(),
            strategy_A=PoliticianStrategy.obedient(),
            strategy_B=PoliticianStrategy.obedient(),
            posterior_a=sol.mu,
            reputations=reps,
            welfare=tau + (1.0 - tau) * (gamma * (mu0 + (1.0 - mu0) * x)
                                         + (1.0 - gamma) * (1.0 - mu0)),
            payoff_A=mu0 + (1.0 - mu0) * exp_a.p_a_given_B,
            payoff_B=1.0,
        )
        return RegimeEquilibrium(regime=regime, case_label=label, outcome=outcome,
                                 defining_residual=sol.residual)

    # Lobbyist B informs: solve the relabeled problem and map back.
    prior_m, gamma_m = 1.0 - mu0, 1.0 - gamma
    sol = _solve_concealed_core(prior_m, tau, theta, gamma_m, curve)
    x_m = _rec_b_given_B(prior_m, sol.mu)  # mirrored P(rec_b|B) = P(rec_a|A)
    exp_b = Experiment(p_a_given_A=x_m, p_a_given_B=0.0)
    reps = ReputationProfile(
        rep_a=tau / (tau + (1.0 - tau) * (gamma + (1.0 - gamma) * x_m)),
        rep_b=tau / (tau + (1.0 - tau) * (1.0 - gamma)),
    )
    outcome = EquilibriumOutcome(
        experiment_A=Experiment.uninformative_always_a(),
        experiment_B=exp_b,
        strategy_A=PoliticianStrategy.obedient(),
        strategy_B=PoliticianStrategy.obedient(),
        posterior_a=sol.mu,
        reputations=reps,
        welfare=tau + (1.0 - tau) * (gamma * mu0
                                     + (1.0 - gamma) * ((1.0 - mu0) + mu0 * x_m)),
        payoff_A=1.0,
        payoff_B=(1.0 - mu0) + mu0 * (1.0 - x_m),
    )
    return RegimeEquilibrium(regime=regime, case_label=label, outcome=outcome,
                             defining_residual=sol.residual)


# ---------------------------------------------------------------------------
# Consequence concealed (the public sees the action but not the state).
# ---------------------------------------------------------------------------

def check_assumption_spade(params: Params) -> bool:
    """Whether the concealed-consequence, concealed-intent regime stays in
    the regime where lobbyist-A is the informer for every gamma."""
    mu0, tau, theta = params.mu0, params.tau, params.theta
    k_rep = tau * (1.0 - mu0) / (tau * (1.0 - mu0) + (1.0 - tau))
    if math.isinf(theta):
        return 0.0 < k_rep - 1.0  # never true: the bound fails at theta = inf
    return quality_gain(mu0) < theta * (k_rep - 1.0)


def _cc_revealed_intent_bracket(prior: float, tau: float, curve: ReputationCurve):
    def bracket(mu: float) -> float:
        x = _rec_b_given_B(prior, mu)
        rep_b = tau / (tau + (1.0 - tau) * x)
        rep_a = tau / (tau + (1.0 - tau) / mu)
        return curve.value(rep_b) - curve.value(rep_a)

    return bracket


def _cc_concealed_intent_bracket(prior: float, tau: float, gamma: float,
                                 curve: ReputationCurve):
    def bracket(mu: float) -> float:
        x = _rec_b_given_B(prior, mu)
        rep_b = tau / (tau + (1.0 - tau) * (gamma * x + (1.0 - gamma) / (1.0 - prior)))
        rep_a = tau / (tau + (1.0 - tau) * gamma / mu)
        return curve.value(rep_b) - curve.value(rep_a)

    return bracket


def _one_sided_cc(prior: float, tau: float, theta: float,
                  curve: ReputationCurve) -> _MuSolution:
    return _solve_mu(prior, theta, _cc_revealed_intent_bracket(prior, tau, curve))


def solve_consequence_concealed(params: Params, intent: Intent = Intent.REVEALED,
                                *, curve: ReputationCurve | None = None
                                ) -> RegimeEquilibrium:
    """Equilibrium when the realized state is never published.

    With intent revealed the lone a-preferring lobbyist must inform more
    than in the baseline.  With intent also concealed the solver first
    checks the parameter restriction guaranteeing lobbyist-A is the
    informer and refuses (AssumptionViolated) otherwise, since no
    characterization exists outside it.
    """
    curve = curve or linear_curve()
    mu0, tau, theta, gamma = params.mu0, params.tau, params.theta, params.gamma

    if intent is Intent.REVEALED:
        sol = _one_sided_cc(mu0, tau, theta, curve)
        exp = Experiment.from_informative_posterior(mu0, sol.mu)
        reps = ReputationProfile(
            rep_a=tau / (tau + (1.0 - tau) / sol.mu),
            rep_b=tau / (tau + (1.0 - tau) * exp.p_b_given_B),
        )
        outcome = EquilibriumOutcome(
            experiment_A=exp, experiment_B=None,
            strategy_A=PoliticianStrategy.obedient(), strategy_B=None,
            posterior_a=sol.mu,
            reputations=reps,
            welfare=tau + (1.0 - tau) * (mu0 + (1.0 - mu0) * exp.p_b_given_B),
            payoff_A=mu0 + (1.0 - mu0) * exp.p_a_given_B,
            payoff_B=None,
        )
        return RegimeEquilibrium(regime=CONCEALED_CONSEQUENCE,
                                 case_label=CaseLabel.BASELINE,
                                 outcome=outcome, defining_residual=sol.residual)

    if not check_assumption_spade(params):
        raise AssumptionViolated(
            "career concerns too strong for the concealed-intent, concealed-"
            "consequence characterization (lobbyist-A might not be the informer)")
    sol = _solve_mu(mu0, theta, _cc_concealed_intent_bracket(mu0, tau, gamma, curve))
    exp_a = Experiment.from_informative_posterior(mu0, sol.mu)
    x = exp_a.p_b_given_B
    reps = ReputationProfile(
        rep_a=tau / (tau + (1.0 - tau) * gamma / sol.mu),
        rep_b=tau / (tau + (1.0 - tau) * (gamma * x + (1.0 - gamma) / (1.0 - mu0))),
    )
    outcome = EquilibriumOutcome(
        experiment_A=exp_a,
        experiment_B=Experiment.uninformative_always_b(),
        strategy_A=PoliticianStrategy.obedient(),
        strategy_B=PoliticianStrategy.obedient(),
        posterior_a=sol.mu,
        reputations=reps,
        welfare=tau + (1.0 - tau) * (gamma * (mu0 + (1.0 - mu0) * x)
                                     + (1.0 - gamma) * (1.0 - mu0)),
        payoff_A=mu0 + (1.0 - mu0) * exp_a.p_a_given_B,
        payoff_B=1.0,
    )
    return RegimeEquilibrium(regime=CONCEALED_BOTH, case_label=CaseLabel.A_INFORMS,
                             outcome=outcome, defining_residual=sol.residual)


# ---------------------------------------------------------------------------
# Comparisons across regimes.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RevealedIntentPair:
    """Per-type equilibria when the register reveals the type, plus the
    ex-ante welfare mixing over the type distribution.  The B side solves
    the relabeled game, where the preferred state's prior exceeds 1/2 and
    the equilibrium can be uninformative."""

    solution_A: _MuSolution
    solution_B: _MuSolution
    welfare_A: float
    welfare_B: float
    welfare_ex_ante: float


def revealed_intent_pair(params: Params, consequence: Consequence,
                         *, curve: ReputationCurve | None = None
                         ) -> RevealedIntentPair:
    curve = curve or linear_curve()
    mu0, tau, theta, gamma = params.mu0, params.tau, params.theta, params.gamma
    solver = _one_sided_baseline if consequence is Consequence.REVEALED else _one_sided_cc
    sol_a = solver(mu0, tau, theta, curve)
    sol_b = solver(1.0 - mu0, tau, theta, curve)
    w_a = tau + (1.0 - tau) * (mu0 + (1.0 - mu0) * _rec_b_given_B(mu0, sol_a.mu))
    w_b = tau + (1.0 - tau) * ((1.0 - mu0)
                               + mu0 * _rec_b_given_B(1.0 - mu0, sol_b.mu))
    return RevealedIntentPair(
        solution_A=sol_a, solution_B=sol_b,
        welfare_A=w_a, welfare_B=w_b,
        welfare_ex_ante=gamma * w_a + (1.0 - gamma) * w_b,
    )


def find_gamma_bar(mu0: float, tau: float, theta: float, *,
                   curve: ReputationCurve | None = None,
                   grid: int = 32, xtol: float = 1e-10) -> float:
    """Largest type-weight threshold below which concealing the consequence
    reduces the informing lobbyist's posterior (numerical crossing of the
    two concealed-intent posteriors in gamma; 1/2 when the comparison holds
    on the entire scanned range).

    A numerical surrogate for the existence threshold: the comparison is
    guaranteed for small enough gamma, and the crossing is located by
    bisection on the posterior gap.
    """
    curve = curve or linear_curve()
    probe = Params(mu0=mu0, tau=tau, theta=theta, gamma=0.25)
    if not check_assumption_spade(probe):
        raise AssumptionViolated("gamma threshold scan requires the concealed-"
                                 "consequence informer restriction to hold")

    def gap(gamma: float) -> float:
        ci = _solve_concealed_core(mu0, tau, theta, gamma, curve)
        cc = _solve_mu(mu0, theta, _cc_concealed_intent_bracket(mu0, tau, gamma, curve))
        return cc.mu - ci.mu

    lo = 1e-4
    if gap(lo) >= 0.0:
        raise SolverError("posterior comparison fails even at tiny gamma")
    step = (0.5 - lo) / grid
    g_prev, v_prev = lo, gap(lo)
    for i in range(1, grid + 1):
        g = lo + i * step
        v = gap(g)
        if v >= 0.0:
            return bisect_increasing(gap, g_prev, g, xtol=xtol)
        g_prev, v_prev = g, v
    return 0.5


def loss_gap_upper_bound(params: Params) -> float:
    """Analytic upper bound on the reputational-loss difference between the
    concealed- and revealed-consequence regimes (concealed intent), used in
    the existence argument for the small-gamma threshold."""
    mu0, tau, theta, gamma = params.mu0, params.tau, params.theta, params.gamma
    lt = 1.0 - tau
    return theta * (
        tau / (tau + lt * (1.0 - gamma) / (1.0 - mu0))
        - 0.5 * tau / (tau + lt * (1.0 - mu0 * gamma / (1.0 - mu0)))
        - tau / (tau + lt * gamma / mu0)
        + 0.5 * tau / (tau + lt * gamma)
    )


def loss_gap_limit(mu0: float, tau: float, theta: float) -> float:
    """Limit of ``loss_gap_upper_bound`` as gamma -> 0+; strictly negative."""
    return -theta * (1.0 - tau) * (1.0 + tau * mu0) / (2.0 * (1.0 - tau * mu0))


def solve_regime(params: Params, regime: Regime, *,
                 curve: ReputationCurve | None = None) -> RegimeEquilibrium:
    """Dispatch to the private-persuasion solver for the given regime."""
    if regime.persuasion is not Persuasion.PRIVATE:
        raise InvalidParams("public persuasion modes are solved in the "
                            "public_persuasion module")
    if regime.consequence is Consequence.REVEALED:
        if regime.intent is Intent.REVEALED:
            return solve_baseline(params, curve=curve)
        return solve_concealed_intent(params, curve=curve)
    return solve_consequence_concealed(params, regime.intent, curve=curve)
