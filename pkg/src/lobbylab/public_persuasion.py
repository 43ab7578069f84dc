"""Equilibria when the persuasion itself is visible to the public.

Two modes: the public sees the experiment only, or also the realized
recommendation.  The latter separates the politician's problem across
recommendations, so the lobbyist's optimum comes from maximizing the
payoff over a one-dimensional family of posteriors (the uninformative-side
posterior is pinned at zero).  Both modes admit general reputational
payoff curves f, provided f's elasticity stays below 1 + 1/theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equilibria import _one_sided_baseline, _rec_b_given_B
from .model import (
    EXPERIMENT_PUBLIC,
    FULLY_PUBLIC,
    Experiment,
    Params,
    Persuasion,
    ReputationCurve,
    linear_curve,
    quality_gain,
)
from .roots import bisect_increasing, bisect_increasing_vec, golden_max


@dataclass(frozen=True)
class ElasticityCheck:
    """Result of the elasticity bound tau f'(tau)/f(tau) <= 1 + 1/theta."""

    holds: bool
    bound: float
    witness_tau: float | None = None
    witness_elasticity: float | None = None


def check_elasticity(curve: ReputationCurve, theta: float, *,
                     grid: int = 10_000, h: float = 1e-6) -> ElasticityCheck:
    """Evaluate the elasticity bound on a grid of (0, 1) by centered
    differences; returns the first violating point if any."""
    if theta == 0.0:
        return ElasticityCheck(holds=True, bound=math.inf)
    bound = 1.0 if math.isinf(theta) else 1.0 + 1.0 / theta
    t = np.linspace(1.0 / (grid + 1), grid / (grid + 1.0), grid)
    deriv = (curve.values(t + h) - curve.values(t - h)) / (2.0 * h)
    vals = curve.values(t)
    elast = t * deriv / vals
    bad = np.nonzero(elast > bound + 1e-9)[0]
    if bad.size == 0:
        return ElasticityCheck(holds=True, bound=bound)
    i = int(bad[0])
    return ElasticityCheck(holds=False, bound=bound,
                           witness_tau=float(t[i]),
                           witness_elasticity=float(elast[i]))


def _p_residual_scalar(p: float, mu: float, tau: float, theta: float,
                       curve: ReputationCurve) -> float:
    ra = tau / (tau + (1.0 - tau) * p)
    rb = tau / (tau + (1.0 - tau) * (1.0 - p))
    bracket = (1.0 - mu) * curve.value(rb) - mu * curve.value(ra)
    if math.isinf(theta):
        return -bracket
    return quality_gain(mu) - theta * bracket


def solve_p_star_public(params: Params, mu: float,
                        curve: ReputationCurve | None = None) -> float:
    """Politician's mixing probability when the recommendation is public.

    Reputations then condition on the recommendation and depend only on the
    mixing probability itself; the gain/loss balance is monotone in p and
    the unique fixed point is clamped into [0, 1].
    """
    curve = curve or linear_curve()
    tau, theta = params.tau, params.theta
    if theta == 0.0:
        g = quality_gain(mu)
        return 1.0 if g > 0.0 else (0.0 if g < 0.0 else 0.5)
    r0 = _p_residual_scalar(0.0, mu, tau, theta, curve)
    if r0 <= 0.0:
        return 0.0
    r1 = _p_residual_scalar(1.0, mu, tau, theta, curve)
    if r1 >= 0.0:
        return 1.0
    return bisect_increasing(
        lambda p: -_p_residual_scalar(p, mu, tau, theta, curve), 0.0, 1.0)


def p_star_public_vec(mu: np.ndarray, tau: float, theta: float,
                      curve: ReputationCurve, *, iters: int = 55) -> np.ndarray:
    """Vectorized fixed point over an array of posteriors."""
    mu = np.asarray(mu, dtype=float)
    if theta == 0.0:
        return np.where(mu > 0.5, 1.0, np.where(mu < 0.5, 0.0, 0.5))
    lt = 1.0 - tau

    def residual(p: np.ndarray) -> np.ndarray:
        ra = tau / (tau + lt * p)
        rb = tau / (tau + lt * (1.0 - p))
        bracket = (1.0 - mu) * curve.values(rb) - mu * curve.values(ra)
        if math.isinf(theta):
            return bracket
        return theta * bracket - (2.0 * mu - 1.0)

    # residual is increasing in p; lock-step bisection converges to the
    # clamped root even when the true root lies outside [0, 1].
    lo = np.zeros_like(mu)
    hi = np.ones_like(mu)
    return bisect_increasing_vec(residual, lo, hi, iters=iters)


@dataclass(frozen=True, eq=False)
class PublicPersuasionSolution:
    """Lobbyist optimum under a public persuasion mode.

    ``p_star_mu``/``p_star_values`` sample the politician's mixing map used
    during the search (fully public mode) or the obedient response
    (experiment-public mode).
    """

    mode: Persuasion
    experiment: Experiment
    mu_dagger_a: float
    lobbyist_payoff: float
    p_star_mu: np.ndarray
    p_star_values: np.ndarray


def solve_experiment_public(params: Params,
                            curve: ReputationCurve | None = None
                            ) -> PublicPersuasionSolution:
    """Optimum when only the experiment is published: identical to the
    private-persuasion optimum (the politician is obedient either way)."""
    curve = curve or linear_curve()
    sol = _one_sided_baseline(params.mu0, params.tau, params.theta, curve)
    exp = Experiment.from_informative_posterior(params.mu0, sol.mu)
    return PublicPersuasionSolution(
        mode=Persuasion.EXPERIMENT_PUBLIC,
        experiment=exp,
        mu_dagger_a=sol.mu,
        lobbyist_payoff=params.mu0 + (1.0 - params.mu0) * exp.p_a_given_B,
        p_star_mu=np.array([sol.mu]),
        p_star_values=np.array([1.0]),
    )


def solve_fully_public(params: Params, curve: ReputationCurve | None = None,
                       *, grid: int = 2001) -> PublicPersuasionSolution:
    """Optimum when experiment and recommendation are both published.

    The uninformative-side posterior is zero, so the payoff is
    mu0 * p*(mu) / mu over the informative-side posterior mu in [1/2, 1];
    a dense grid locates the basin and golden-section search refines it.
    """
    curve = curve or linear_curve()
    mu0, tau, theta = params.mu0, params.tau, params.theta
    mus = np.linspace(0.5, 1.0, grid)
    ps = p_star_public_vec(mus, tau, theta, curve)
    vals = mu0 * ps / mus
    i = int(np.argmax(vals))

    def objective(mu: float) -> float:
        return mu0 * solve_p_star_public(params, mu, curve) / mu

    lo = mus[max(i - 1, 0)]
    hi = mus[min(i + 1, grid - 1)]
    mu_ref, val_ref = golden_max(objective, lo, hi)
    if vals[i] > val_ref:
        mu_ref, val_ref = float(mus[i]), float(vals[i])
    exp = Experiment.from_informative_posterior(mu0, mu_ref)
    return PublicPersuasionSolution(
        mode=Persuasion.FULLY_PUBLIC,
        experiment=exp,
        mu_dagger_a=mu_ref,
        lobbyist_payoff=val_ref,
        p_star_mu=mus,
        p_star_values=ps,
    )


def _tracked_response_one_sided(x: np.ndarray, mu0: float, tau: float,
                                theta: float, curve: ReputationCurve
                                ) -> tuple[np.ndarray, np.ndarray]:
    """Politician mixing after rec_a for experiments (1, 1-x), with the
    public conditioning reputations on the actual (published) experiment.
    Returns (posterior, p)."""
    x = np.asarray(x, dtype=float)
    mu = mu0 / (mu0 + (1.0 - mu0) * (1.0 - x))
    if theta == 0.0:
        return mu, np.where(mu > 0.5, 1.0, np.where(mu < 0.5, 0.0, 0.5))
    lt = 1.0 - tau

    def residual(p: np.ndarray) -> np.ndarray:
        ra = tau / (tau + lt * p)
        rb = tau / (tau + lt * (1.0 - (1.0 - x) * p))
        bracket = (1.0 - mu) * curve.values(rb) - mu * curve.values(ra)
        if math.isinf(theta):
            return bracket
        return theta * bracket - (2.0 * mu - 1.0)

    p = bisect_increasing_vec(residual, np.zeros_like(mu), np.ones_like(mu))
    return mu, p


@dataclass(frozen=True)
class EquivalenceReport:
    """Grid-search cross-check that publishing the experiment leaves the
    lobbyist optimum unchanged."""

    baseline_rec_b_given_B: float
    grid_rec_b_given_B: float
    distance: float
    grid_payoff: float
    baseline_payoff: float
    induced_p_at_optimum: float
    total_points: int


def verify_experiment_public_equivalence(params: Params,
                                         curve: ReputationCurve | None = None,
                                         *, total_points: int = 100_000
                                         ) -> EquivalenceReport:
    """Search experiments with p_a_given_A = 1 on a staged, zooming grid of
    P(rec_b | B), responding with the published-experiment fixed point, and
    report the distance of the payoff maximizer from the private optimum."""
    curve = curve or linear_curve()
    mu0, tau, theta = params.mu0, params.tau, params.theta
    base = _one_sided_baseline(mu0, tau, theta, curve)
    x_star = _rec_b_given_B(mu0, base.mu)

    stages = [int(total_points * w) for w in (0.4, 0.2, 0.2, 0.2)]
    lo, hi = 0.0, 1.0
    best_x = best_payoff = best_p = 0.0
    for n in stages:
        xs = np.linspace(lo, hi, n)
        _, ps = _tracked_response_one_sided(xs, mu0, tau, theta, curve)
        payoff = (mu0 + (1.0 - mu0) * (1.0 - xs)) * ps
        i = int(np.argmax(payoff))
        best_x, best_payoff, best_p = float(xs[i]), float(payoff[i]), float(ps[i])
        spacing = (hi - lo) / (n - 1)
        lo = max(0.0, best_x - 2.0 * spacing)
        hi = min(1.0, best_x + 2.0 * spacing)
    return EquivalenceReport(
        baseline_rec_b_given_B=x_star,
        grid_rec_b_given_B=best_x,
        distance=abs(best_x - x_star),
        grid_payoff=best_payoff,
        baseline_payoff=mu0 / base.mu if base.mu > 0 else 1.0,
        induced_p_at_optimum=best_p,
        total_points=sum(stages),
    )


def replication_posterior(params: Params, curve: ReputationCurve | None,
                          p_dagger: float) -> float:
    """Posterior of the private experiment that replicates a given public
    mixing probability (obedient after rec_b, mixing p_dagger after rec_a).

    Always strictly below the public-mode posterior it replicates, which is
    what makes private persuasion weakly cheaper for the lobbyist.
    """
    curve = curve or linear_curve()
    mu0, tau, theta = params.mu0, params.tau, params.theta
    if theta == 0.0:
        return 0.5
    k = 0.0 if math.isinf(theta) else 1.0 / theta
    lt = 1.0 - tau
    f_ra = curve.value(tau / (tau + lt * p_dagger))

    def residual(mu: float) -> float:
        x_a = mu0 * (1.0 - mu) / ((1.0 - mu0) * mu)  # P(rec_a | B)
        rb = tau / (tau + lt * (1.0 - x_a * p_dagger))
        bracket = (1.0 - mu) * curve.value(rb) - mu * f_ra
        return quality_gain(mu) * k - bracket

    return bisect_increasing(residual, mu0, 1.0, xtol=5e-14)
