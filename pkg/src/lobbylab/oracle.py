"""Independent brute-force verification of candidate equilibria.

Politician optimality is checked by enumerating responses against
reputations frozen at the candidate's public beliefs; lobbyist optimality
by grid-searching the whole experiment square, with the politician
responding the way each persuasion mode allows (beliefs frozen at the
candidate under private persuasion, tracking the probe under public
persuasion).  Reputation formulas are cross-checked by seeded Monte Carlo
simulation of the full information structure.

Probe responses resolve exact politician indifference against the
deviating lobbyist, so a candidate sitting exactly on an indifference
ridge is never spuriously "beaten" by a probe replicating it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .equilibria import RegimeEquilibrium
from .model import (
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
    linear_curve,
    posterior,
    reputation_profile,
)
from .public_persuasion import (
    PublicPersuasionSolution,
    p_star_public_vec,
    solve_p_star_public,
)
from .roots import bisect_increasing_vec

CERTIFICATION_GAIN = 1e-7
DETECTION_GAIN = 1e-9


@dataclass(frozen=True)
class DeviationReport:
    """Best improvements found for either player, with argmax witnesses.

    A certified equilibrium has both gains <= 1e-7 at the default grid.
    ``mc_max_sigma``/``mc_ok`` are filled when Monte Carlo reputation
    checking is requested (analytic vs empirical, three standard errors).
    """

    max_politician_gain: float
    max_lobbyist_gain: float
    politician_witness: dict[str, Any] | None
    lobbyist_witness: dict[str, Any] | None
    grid_resolution: int
    zoom_resolution: int
    mc_samples: int
    seed: int
    mc_max_sigma: float | None = None
    mc_ok: bool | None = None

    @property
    def certified(self) -> bool:
        gains_ok = (self.max_politician_gain <= CERTIFICATION_GAIN
                    and self.max_lobbyist_gain <= CERTIFICATION_GAIN)
        return gains_ok and (self.mc_ok is not False)


def _action_values(mu: float, reps: ReputationProfile, theta: float,
                   curve: ReputationCurve, consequence: Consequence
                   ) -> tuple[float, float]:
    """Expected utility of the pure actions at posterior mu, reputations
    fixed; theta = inf drops to the reputation-only scale."""
    fa, fb = curve.value(reps.rep_a), curve.value(reps.rep_b)
    if consequence is Consequence.REVEALED:
        if math.isinf(theta):
            return mu * fa, (1.0 - mu) * fb
        return mu * (1.0 + theta * fa), (1.0 - mu) * (1.0 + theta * fb)
    if math.isinf(theta):
        return fa, fb
    return mu + theta * fa, (1.0 - mu) + theta * fb


def verify_politician(params: Params, regime: Regime, beliefs: BeliefBundle,
                      *, curve: ReputationCurve | None = None,
                      mix_grid: int = 1001) -> tuple[float, dict[str, Any] | None]:
    """Best utility improvement any politician response earns over the
    candidate, public beliefs (hence reputations) held at the candidate.

    Enumerates both pure responses and a mixing grid per recommendation;
    utilities are linear in the mixing probability so the grid is a
    redundancy check on the corners.
    """
    curve = curve or linear_curve()
    entries = beliefs.present()
    pooled = regime.intent is Intent.CONCEALED
    reps_pooled = reputation_profile(params, regime, beliefs) if pooled else None

    ps = np.linspace(0.0, 1.0, mix_grid)
    total_gain = 0.0
    witness: dict[str, Any] | None = None
    best_single = -math.inf
    for t, exp, strat in entries:
        w_type = 1.0 if not pooled else (
            params.gamma if t is Lobbyist.A else 1.0 - params.gamma)
        for rec in (Rec.A, Rec.B):
            p_rec = exp.marginal(params.mu0, rec)
            if p_rec == 0.0:
                continue
            mu = posterior(params.mu0, exp, rec)
            if regime.persuasion is Persuasion.FULLY_PUBLIC:
                reps = reputation_profile(params, regime, beliefs,
                                          facing=None if pooled else t, rec=rec)
            elif pooled:
                reps = reps_pooled
            else:
                reps = reputation_profile(params, regime, beliefs, facing=t)
            va, vb = _action_values(mu, reps, params.theta, curve,
                                    regime.consequence)
            candidate = strat.p_for(rec) * va + (1.0 - strat.p_for(rec)) * vb
            best = float(np.max(ps * va + (1.0 - ps) * vb))
            best = max(best, va, vb)
            gain = best - candidate
            total_gain += w_type * p_rec * gain
            if gain > best_single:
                best_single = gain
                witness = {"lobbyist": t.value, "rec": rec.value,
                           "best_p": 1.0 if va >= vb else 0.0,
                           "candidate_p": strat.p_for(rec),
                           "interim_gain": gain}
    return max(total_gain, 0.0), witness


def _probe_posteriors(mu0: float, aa: np.ndarray, ab: np.ndarray
                      ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Marginals and posteriors for both recommendations over a probe grid."""
    pa = mu0 * aa + (1.0 - mu0) * ab
    pb = 1.0 - pa
    with np.errstate(invalid="ignore", divide="ignore"):
        mu_a = np.where(pa > 0.0, mu0 * aa / np.maximum(pa, 1e-300), 0.0)
        mu_b = np.where(pb > 0.0, mu0 * (1.0 - aa) / np.maximum(pb, 1e-300), 0.0)
    return pa, pb, mu_a, mu_b


def _frozen_margin(mu: np.ndarray, fa: float, fb: float, theta: float,
                   consequence: Consequence) -> np.ndarray:
    """Preference for action a at posterior mu with reputations frozen."""
    if consequence is Consequence.REVEALED:
        bracket = (1.0 - mu) * fb - mu * fa
    else:
        bracket = (fb - fa) * np.ones_like(mu)
    if math.isinf(theta):
        return -bracket
    return (2.0 * mu - 1.0) - theta * bracket


def _private_probe_payoff(params: Params, reps: ReputationProfile,
                          consequence: Consequence, curve: ReputationCurve,
                          preferred: str, aa: np.ndarray, ab: np.ndarray
                          ) -> np.ndarray:
    fa, fb = curve.value(reps.rep_a), curve.value(reps.rep_b)
    pa, pb, mu_a, mu_b = _probe_posteriors(params.mu0, aa, ab)
    m_a = _frozen_margin(mu_a, fa, fb, params.theta, consequence)
    m_b = _frozen_margin(mu_b, fa, fb, params.theta, consequence)
    if preferred == "a":
        take_a = m_a > 0.0
        take_b = m_b > 0.0
        return np.where(pa > 0, pa * take_a, 0.0) + np.where(pb > 0, pb * take_b, 0.0)
    take_a = m_a < 0.0
    take_b = m_b < 0.0
    return np.where(pa > 0, pa * take_a, 0.0) + np.where(pb > 0, pb * take_b, 0.0)


def _grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    side = np.linspace(0.0, 1.0, n)
    aa, ab = np.meshgrid(side, side, indexing="ij")
    return aa.ravel(), ab.ravel()


def _zoom_grid(center: tuple[float, float], half_width: float, n: int
               ) -> tuple[np.ndarray, np.ndarray]:
    ca, cb = center
    sa = np.linspace(max(ca - half_width, 0.0), min(ca + half_width, 1.0), n)
    sb = np.linspace(max(cb - half_width, 0.0), min(cb + half_width, 1.0), n)
    aa, ab = np.meshgrid(sa, sb, indexing="ij")
    return aa.ravel(), ab.ravel()


def verify_lobbyist(params: Params, regime: Regime, candidate: RegimeEquilibrium,
                    *, curve: ReputationCurve | None = None, grid: int = 300,
                    zoom: int = 100) -> tuple[float, dict[str, Any] | None]:
    """Best payoff improvement any experiment earns over the candidate for
    each lobbyist type present, public beliefs frozen at the candidate
    (private persuasion deviations are invisible to the public).

    The coarse grid covers the whole experiment square; a local zoom around
    the candidate catches the near-ridge deviations where violations of
    obedience-based optimality would first appear.
    """
    curve = curve or linear_curve()
    if regime.persuasion is not Persuasion.PRIVATE:
        raise InvalidParams("use verify_public_lobbyist for public persuasion")
    out = candidate.outcome
    reps = out.reputations
    best_gain = -math.inf
    witness: dict[str, Any] | None = None
    sides: list[tuple[Lobbyist, Experiment, float]] = []
    if out.experiment_A is not None:
        sides.append((Lobbyist.A, out.experiment_A, out.payoff_A))
    if out.experiment_B is not None:
        sides.append((Lobbyist.B, out.experiment_B, out.payoff_B))
    for t, exp, payoff in sides:
        for aa, ab in (_grid(grid),
                       _zoom_grid((exp.p_a_given_A, exp.p_a_given_B),
                                  2.0 / (grid - 1), zoom)):
            probes = _private_probe_payoff(params, reps, regime.consequence,
                                           curve, t.preferred_action, aa, ab)
            i = int(np.argmax(probes))
            gain = float(probes[i]) - payoff
            if gain > best_gain:
                best_gain = gain
                witness = {"lobbyist": t.value,
                           "p_a_given_A": float(aa[i]),
                           "p_a_given_B": float(ab[i]),
                           "probe_payoff": float(probes[i]),
                           "candidate_payoff": payoff}
    return max(best_gain, 0.0), witness


def _tracked_response_grid(aa: np.ndarray, ab: np.ndarray, mu0: float,
                           tau: float, theta: float, curve: ReputationCurve
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Politician response (p_after_a, p_after_b) to each probe when the
    public observes the experiment, so reputations track the probe and the
    response is the obedience-case fixed point with a consistency check."""
    # Canonicalize labels: payoffs are label-free once we report per-action
    # probabilities, so swap to make rec_a the a-leaning recommendation.
    swap = aa < ab
    ca = np.where(swap, 1.0 - aa, aa)
    cb = np.where(swap, 1.0 - ab, ab)
    pa, pb, mu_a, mu_b = _probe_posteriors(mu0, ca, cb)
    lt = 1.0 - tau
    inf_theta = math.isinf(theta)

    def margin(mu, pool_a, pool_b):
        ra = tau / (tau + lt * pool_a)
        rb = tau / (tau + lt * pool_b)
        bracket = (1.0 - mu) * curve.values(rb) - mu * curve.values(ra)
        if inf_theta:
            return -bracket
        return (2.0 * mu - 1.0) - theta * bracket

    if theta == 0.0:
        p1 = np.where(mu_a > 0.5, 1.0, np.where(mu_a < 0.5, 0.0, 0.5))
        q2 = np.where(mu_b > 0.5, 1.0, np.where(mu_b < 0.5, 0.0, 0.5))
        # theta = 0 has no reputation channel; obedience cases collapse to
        # the quality rule per recommendation.
        p_after_a, p_after_b = p1, q2
    else:
        # Case 1: obey rec_b, mix p after rec_a.
        p1 = bisect_increasing_vec(
            lambda p: -margin(mu_a, ca * p, 1.0 - cb * p),
            np.zeros_like(ca), np.ones_like(ca))
        feas1 = margin(mu_b, ca * p1, 1.0 - cb * p1) <= 1e-10
        # Case 2: obey rec_a, mix q after rec_b (only where case 1 fails).
        q2 = bisect_increasing_vec(
            lambda q: -margin(mu_b, ca + (1.0 - ca) * q, (1.0 - cb) * (1.0 - q)),
            np.zeros_like(ca), np.ones_like(ca))
        p_after_a = np.where(feas1, p1, 1.0)
        p_after_b = np.where(feas1, 0.0, q2)
        degenerate = ca == cb
        if np.any(degenerate):
            pd = bisect_increasing_vec(
                lambda p: -margin(np.full_like(ca, mu0), p, 1.0 - p),
                np.zeros_like(ca), np.ones_like(ca))
            p_after_a = np.where(degenerate, pd, p_after_a)
            p_after_b = np.where(degenerate, pd, p_after_b)
    # Undo the label swap: only the recommendation labels were exchanged,
    # so the per-recommendation action probabilities swap places.
    ra = np.where(swap, p_after_b, p_after_a)
    rb = np.where(swap, p_after_a, p_after_b)
    return ra, rb


def verify_public_lobbyist(params: Params, solution: PublicPersuasionSolution,
                           *, curve: ReputationCurve | None = None,
                           grid: int = 300, zoom: int = 100
                           ) -> tuple[float, dict[str, Any] | None]:
    """Experiment grid search under public persuasion: the politician's
    response tracks each probe (she sees the experiment, and under the
    fully public mode the public also sees the recommendation)."""
    curve = curve or linear_curve()
    mu0, tau, theta = params.mu0, params.tau, params.theta
    cand = solution.experiment
    best_gain = -math.inf
    witness: dict[str, Any] | None = None
    for aa, ab in (_grid(grid),
                   _zoom_grid((cand.p_a_given_A, cand.p_a_given_B),
                              2.0 / (grid - 1), zoom)):
        pa, pb, mu_a, mu_b = _probe_posteriors(mu0, aa, ab)
        if solution.mode is Persuasion.FULLY_PUBLIC:
            resp_a = p_star_public_vec(mu_a, tau, theta, curve)
            resp_b = p_star_public_vec(mu_b, tau, theta, curve)
        else:
            resp_a, resp_b = _tracked_response_grid(aa, ab, mu0, tau, theta, curve)
        payoff = (np.where(pa > 0, pa * resp_a, 0.0)
                  + np.where(pb > 0, pb * resp_b, 0.0))
        i = int(np.argmax(payoff))
        gain = float(payoff[i]) - solution.lobbyist_payoff
        if gain > best_gain:
            best_gain = gain
            witness = {"lobbyist": "A",
                       "p_a_given_A": float(aa[i]),
                       "p_a_given_B": float(ab[i]),
                       "probe_payoff": float(payoff[i]),
                       "candidate_payoff": solution.lobbyist_payoff}
    return max(best_gain, 0.0), witness


@dataclass(frozen=True)
class McCell:
    observations: int
    high_count: int
    frequency: float | None
    std_error: float | None


@dataclass(frozen=True)
class McReputationReport:
    """Empirical high-ability frequencies per regime-visible cell.

    Cells with zero observations stay empty (frequency ``None``) rather
    than imputing a value.  Deterministic for a given seed.
    """

    cell_a: McCell
    cell_b: McCell
    samples: int
    seed: int

    def max_sigma(self, analytic: ReputationProfile) -> float:
        worst = 0.0
        for cell, value in ((self.cell_a, analytic.rep_a),
                            (self.cell_b, analytic.rep_b)):
            if cell.frequency is None:
                continue
            se = cell.std_error if cell.std_error and cell.std_error > 0 else 1e-12
            worst = max(worst, abs(cell.frequency - value) / se)
        return worst


def monte_carlo_reputation(params: Params, regime: Regime, beliefs: BeliefBundle,
                           samples: int, seed: int, *,
                           facing: Lobbyist | None = None,
                           rec: Rec | None = None,
                           chunk: int = 1 << 19) -> McReputationReport:
    """Simulate (ability, type, state, recommendation, action) tuples and
    tally high-ability frequencies on the regime's conditioning cells.

    Sharded into chunks with seeds derived from a single SeedSequence;
    counts are summed exactly, so results are reproducible bit for bit.
    """
    if regime.persuasion is Persuasion.FULLY_PUBLIC and rec is None:
        raise InvalidParams("rec required when recommendations are public")
    entries = beliefs.present()
    if regime.intent is Intent.REVEALED:
        if facing is None:
            if len(entries) != 1:
                raise InvalidParams("facing required with two types and "
                                    "revealed intent")
            facing = entries[0][0]
        entries = [e for e in entries if e[0] is facing]

    by_type = {t: (exp, strat) for t, exp, strat in entries}
    n_a = n_b = h_a = h_b = 0
    ss = np.random.SeedSequence(seed)
    remaining = int(samples)
    children = ss.spawn(max(1, -(-remaining // chunk)))
    for child in children:
        n = min(chunk, remaining)
        if n <= 0:
            break
        remaining -= n
        rng = np.random.Generator(np.random.PCG64(child))
        u = rng.random((5, n))
        high = u[0] < params.tau
        if regime.intent is Intent.CONCEALED:
            is_A = u[1] < params.gamma
        else:
            is_A = np.full(n, facing is Lobbyist.A)
        state_A = u[2] < params.mu0

        p_rec_a = np.zeros(n)
        for t, (exp, _) in by_type.items():
            mask = is_A if t is Lobbyist.A else ~is_A
            p_rec_a[mask] = np.where(state_A[mask], exp.p_a_given_A,
                                     exp.p_a_given_B)
        rec_a = u[3] < p_rec_a
        p_act_a = np.zeros(n)
        for t, (_, strat) in by_type.items():
            mask = is_A if t is Lobbyist.A else ~is_A
            p_act_a[mask] = np.where(rec_a[mask], strat.p_after_a,
                                     strat.p_after_b)
        act_a = np.where(high, state_A, u[4] < p_act_a)

        sel = np.ones(n, dtype=bool)
        if regime.persuasion is Persuasion.FULLY_PUBLIC:
            sel = rec_a if rec is Rec.A else ~rec_a
        if regime.consequence is Consequence.REVEALED:
            cell_a = sel & act_a & state_A
            cell_b = sel & ~act_a & ~state_A
        else:
            cell_a = sel & act_a
            cell_b = sel & ~act_a
        n_a += int(cell_a.sum())
        n_b += int(cell_b.sum())
        h_a += int((cell_a & high).sum())
        h_b += int((cell_b & high).sum())

    def cell(n_obs: int, hits: int) -> McCell:
        if n_obs == 0:
            return McCell(0, 0, None, None)
        f = hits / n_obs
        return McCell(n_obs, hits, f, math.sqrt(max(f * (1.0 - f), 0.0) / n_obs))

    return McReputationReport(cell_a=cell(n_a, h_a), cell_b=cell(n_b, h_b),
                              samples=int(samples), seed=int(seed))


def verify_equilibrium(params: Params, candidate: RegimeEquilibrium, *,
                       curve: ReputationCurve | None = None, grid: int = 300,
                       zoom: int = 100, mc_samples: int = 0, seed: int = 0
                       ) -> DeviationReport:
    """Full certification bundle for a private-persuasion equilibrium."""
    curve = curve or linear_curve()
    beliefs = candidate.outcome.to_bundle()
    pol_gain, pol_w = verify_politician(params, candidate.regime, beliefs,
                                        curve=curve)
    lob_gain, lob_w = verify_lobbyist(params, candidate.regime, candidate,
                                      curve=curve, grid=grid, zoom=zoom)
    mc_sigma = mc_ok = None
    if mc_samples > 0:
        facing = None
        if candidate.regime.intent is Intent.REVEALED:
            facing = Lobbyist.A
        report = monte_carlo_reputation(params, candidate.regime, beliefs,
                                        mc_samples, seed, facing=facing)
        mc_sigma = report.max_sigma(candidate.outcome.reputations)
        mc_ok = mc_sigma <= 3.0
    return DeviationReport(
        max_politician_gain=pol_gain, max_lobbyist_gain=lob_gain,
        politician_witness=pol_w, lobbyist_witness=lob_w,
        grid_resolution=grid, zoom_resolution=zoom,
        mc_samples=mc_samples, seed=seed,
        mc_max_sigma=mc_sigma, mc_ok=mc_ok)


def verify_public_solution(params: Params, solution: PublicPersuasionSolution,
                           *, curve: ReputationCurve | None = None,
                           grid: int = 300, zoom: int = 100, seed: int = 0
                           ) -> DeviationReport:
    """Certification bundle for a public-persuasion optimum: the politician
    check uses the recommendation-conditional reputations, the lobbyist
    check the tracked probe responses."""
    curve = curve or linear_curve()
    if solution.mode is Persuasion.FULLY_PUBLIC:
        p_top = solve_p_star_public(params, solution.mu_dagger_a, curve)
    else:
        p_top = 1.0
    strat = PoliticianStrategy(p_after_a=p_top, p_after_b=0.0)
    beliefs = BeliefBundle(experiment_A=solution.experiment, strategy_A=strat)
    regime = Regime(persuasion=solution.mode)
    pol_gain, pol_w = verify_politician(params, regime, beliefs, curve=curve)
    lob_gain, lob_w = verify_public_lobbyist(params, solution, curve=curve,
                                             grid=grid, zoom=zoom)
    return DeviationReport(
        max_politician_gain=pol_gain, max_lobbyist_gain=lob_gain,
        politician_witness=pol_w, lobbyist_witness=lob_w,
        grid_resolution=grid, zoom_resolution=zoom,
        mc_samples=0, seed=seed)
