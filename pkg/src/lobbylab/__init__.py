"""Equilibrium laboratory for a lobbyist-politician persuasion game with
career concerns under transparency regimes."""

from .analysis import (
    BlackwellRelation,
    BlackwellVerdict,
    Figure1Table,
    SweepResult,
    blackwell_compare,
    equilibrium_row,
    figure1_rows,
    figure1_table,
    informative_posterior_order,
    sweep,
    verify_garbling,
    write_csv,
    write_json,
)
from .best_response import (
    BestResponse,
    mixing_theta_slope,
    politician_response,
    solve_indifference,
)
from .equilibria import (
    CaseLabel,
    RegimeEquilibrium,
    RevealedIntentPair,
    check_assumption_spade,
    check_condition_club,
    classify_concealed_intent,
    concealed_intent_residual,
    find_gamma_bar,
    loss_gap_limit,
    loss_gap_upper_bound,
    mirror_experiment,
    revealed_intent_pair,
    solve_baseline,
    solve_concealed_intent,
    solve_consequence_concealed,
    solve_regime,
)
from .model import (
    BASELINE,
    CONCEALED_BOTH,
    CONCEALED_CONSEQUENCE,
    CONCEALED_INTENT,
    EXPERIMENT_PUBLIC,
    FULLY_PUBLIC,
    AssumptionViolated,
    BeliefBundle,
    Consequence,
    CurveKind,
    EquilibriumOutcome,
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
    ReputationLoss,
    ReputationProfile,
    SolverError,
    curve_from_callable,
    curve_from_file,
    curve_from_table,
    decision_margin,
    linear_curve,
    lobbyist_payoff,
    posterior,
    quality_gain,
    regime_by_name,
    reputation_loss,
    reputation_profile,
    welfare,
)
from .oracle import (
    DeviationReport,
    McReputationReport,
    monte_carlo_reputation,
    verify_equilibrium,
    verify_lobbyist,
    verify_politician,
    verify_public_lobbyist,
    verify_public_solution,
)
from .public_persuasion import (
    ElasticityCheck,
    EquivalenceReport,
    PublicPersuasionSolution,
    check_elasticity,
    p_star_public_vec,
    replication_posterior,
    solve_experiment_public,
    solve_fully_public,
    solve_p_star_public,
    verify_experiment_public_equivalence,
)

__version__ = "0.1.0"
