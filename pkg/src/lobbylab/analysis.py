"""Cross-regime comparisons: informativeness order, welfare table, sweeps.

Emits flat CSV rows (fixed schema: mu0,tau,theta,gamma,regime,case,mu_info,
welfare,payoff_A,payoff_B) and JSON mirrors; no plotting.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

from .equilibria import (
    RegimeEquilibrium,
    revealed_intent_pair,
    solve_regime,
)
from .model import (
    CONCEALED_BOTH,
    CONCEALED_INTENT,
    Consequence,
    Experiment,
    Intent,
    InvalidParams,
    Params,
    Regime,
    ReputationCurve,
)

CSV_COLUMNS = ("mu0", "tau", "theta", "gamma", "regime", "case",
               "mu_info", "welfare", "payoff_A", "payoff_B")

#: Welfare differences inside this band are reported as sign "0".
SIGN_DEADBAND = 1e-9


class BlackwellRelation(Enum):
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class BlackwellVerdict:
    relation: BlackwellRelation
    garbling_witness: tuple[tuple[float, float], tuple[float, float]] | None


_GARBLING_TOL = 1e-10


def _garbling_matrix(e1: Experiment, e2: Experiment
                     ) -> tuple[tuple[float, float], tuple[float, float]] | None:
    """Row-stochastic G with pi2 = pi1 @ G, or None if no valid G exists."""
    a1, b1 = e1.p_a_given_A, e1.p_a_given_B
    a2, b2 = e2.p_a_given_A, e2.p_a_given_B
    det = a1 - b1
    if abs(det) <= 1e-14:
        # e1 uninformative: it can only produce uninformative mixtures.
        if abs(a2 - b2) > _GARBLING_TOL:
            return None
        c = a2
        return ((c, 1.0 - c), (c, 1.0 - c))
    g11 = ((1.0 - b1) * a2 - (1.0 - a1) * b2) / det
    g21 = (a1 * b2 - b1 * a2) / det
    G = ((g11, 1.0 - g11), (g21, 1.0 - g21))
    for row in G:
        for v in row:
            if v < -_GARBLING_TOL or v > 1.0 + _GARBLING_TOL:
                return None
    # Round away float dust so the witness verifies cleanly.
    return tuple(tuple(min(max(v, 0.0), 1.0) for v in row) for row in G)


def blackwell_compare(e1: Experiment, e2: Experiment,
                      prior: float | None = None) -> BlackwellVerdict:
    """Informativeness order by garbling factorization.

    ``prior`` is accepted for interface symmetry with the posterior-based
    shortcut (see ``informative_posterior_order``) but the factorization
    itself is prior-free.
    """
    del prior
    g12 = _garbling_matrix(e1, e2)
    g21 = _garbling_matrix(e2, e1)
    if g12 is not None and g21 is not None:
        witness = ((1.0, 0.0), (0.0, 1.0)) if e1 == e2 else g12
        return BlackwellVerdict(BlackwellRelation.EQUAL, witness)
    if g12 is not None:
        return BlackwellVerdict(BlackwellRelation.DOMINATES, g12)
    if g21 is not None:
        return BlackwellVerdict(BlackwellRelation.DOMINATED_BY, g21)
    return BlackwellVerdict(BlackwellRelation.INCOMPARABLE, None)


def informative_posterior_order(e1: Experiment, e2: Experiment, prior: float
                                ) -> BlackwellRelation:
    """Shortcut valid for the zero-posterior equilibrium family: compare
    the posteriors at the informative recommendation.  Used as a
    cross-check of the factorization, never as a substitute."""
    for e in (e1, e2):
        if e.p_a_given_A != 1.0:
            raise InvalidParams("posterior shortcut requires p_a_given_A = 1")
    m1 = prior / (prior + (1.0 - prior) * e1.p_a_given_B)
    m2 = prior / (prior + (1.0 - prior) * e2.p_a_given_B)
    if abs(m1 - m2) <= 1e-12:
        return BlackwellRelation.EQUAL
    return (BlackwellRelation.DOMINATES if m1 > m2
            else BlackwellRelation.DOMINATED_BY)


def verify_garbling(e1: Experiment, e2: Experiment,
                    witness: tuple[tuple[float, float], tuple[float, float]]
                    ) -> float:
    """Max abs error of pi2 = pi1 @ G for a claimed witness."""
    a1, b1 = e1.p_a_given_A, e1.p_a_given_B
    errs = [
        abs(a1 * witness[0][0] + (1 - a1) * witness[1][0] - e2.p_a_given_A),
        abs(b1 * witness[0][0] + (1 - b1) * witness[1][0] - e2.p_a_given_B),
    ]
    return max(errs)


def _sign(delta: float) -> str:
    if abs(delta) <= SIGN_DEADBAND:
        return "0"
    return "+" if delta > 0 else "-"


@dataclass(frozen=True)
class Figure1Table:
    """Welfare in the four intent/consequence transparency cells plus the
    signed effects of switching each dimension to transparent.

    ``intent_effect_consequence_concealed`` is computed but carries no
    theoretical guarantee; the other three signs do (given the small-gamma
    premise for ``consequence_effect_intent_concealed``).
    """

    welfare_revealed_revealed: float
    welfare_concealed_revealed: float
    welfare_revealed_concealed: float
    welfare_concealed_concealed: float
    intent_effect_consequence_revealed: str
    intent_effect_consequence_concealed: str
    consequence_effect_intent_revealed: str
    consequence_effect_intent_concealed: str

    def cells(self) -> dict[str, float]:
        return {
            "intent_revealed,consequence_revealed": self.welfare_revealed_revealed,
            "intent_concealed,consequence_revealed": self.welfare_concealed_revealed,
            "intent_revealed,consequence_concealed": self.welfare_revealed_concealed,
            "intent_concealed,consequence_concealed": self.welfare_concealed_concealed,
        }

    def signs(self) -> dict[str, str]:
        return {
            "intent_effect_consequence_revealed": self.intent_effect_consequence_revealed,
            "intent_effect_consequence_concealed": self.intent_effect_consequence_concealed,
            "consequence_effect_intent_revealed": self.consequence_effect_intent_revealed,
            "consequence_effect_intent_concealed": self.consequence_effect_intent_concealed,
        }


def figure1_table(params: Params, *, curve: ReputationCurve | None = None
                  ) -> Figure1Table:
    """Solve all four private-persuasion transparency cells at one parameter
    point.  Revealed-intent cells mix the per-type games with the type
    weight; concealed cells come from the pooled solvers.  Raises
    AssumptionViolated when the concealed/concealed cell is out of range.
    """
    w_rr = revealed_intent_pair(params, Consequence.REVEALED, curve=curve).welfare_ex_ante
    w_rc = revealed_intent_pair(params, Consequence.CONCEALED, curve=curve).welfare_ex_ante
    w_cr = solve_regime(params, CONCEALED_INTENT, curve=curve).outcome.welfare
    w_cc = solve_regime(params, CONCEALED_BOTH, curve=curve).outcome.welfare
    return Figure1Table(
        welfare_revealed_revealed=w_rr,
        welfare_concealed_revealed=w_cr,
        welfare_revealed_concealed=w_rc,
        welfare_concealed_concealed=w_cc,
        intent_effect_consequence_revealed=_sign(w_rr - w_cr),
        intent_effect_consequence_concealed=_sign(w_rc - w_cc),
        consequence_effect_intent_revealed=_sign(w_rr - w_rc),
        consequence_effect_intent_concealed=_sign(w_cr - w_cc),
    )


def figure1_rows(params: Params, table: Figure1Table) -> list[dict[str, Any]]:
    regimes = {
        "intent_revealed,consequence_revealed": "baseline",
        "intent_concealed,consequence_revealed": "concealed_intent",
        "intent_revealed,consequence_concealed": "concealed_consequence",
        "intent_concealed,consequence_concealed": "concealed_both",
    }
    rows = []
    for cell, welfare in table.cells().items():
        rows.append({
            "mu0": params.mu0, "tau": params.tau, "theta": params.theta,
            "gamma": params.gamma, "regime": regimes[cell], "case": cell,
            "mu_info": "", "welfare": welfare, "payoff_A": "", "payoff_B": "",
        })
    return rows


def equilibrium_row(params: Params, eq: RegimeEquilibrium) -> dict[str, Any]:
    out = eq.outcome
    return {
        "mu0": params.mu0,
        "tau": params.tau,
        "theta": params.theta,
        "gamma": params.gamma,
        "regime": eq.regime.name,
        "case": eq.case_label.value,
        "mu_info": out.posterior_a,
        "welfare": out.welfare,
        "payoff_A": out.payoff_A if out.payoff_A is not None else "",
        "payoff_B": out.payoff_B if out.payoff_B is not None else "",
    }


_AXES = ("theta", "gamma", "mu0", "tau")


@dataclass(frozen=True, eq=False)
class SweepResult:
    axis: str
    grid: tuple[float, ...]
    regime: Regime
    rows: tuple[dict[str, Any], ...]
    errors: tuple[dict[str, Any], ...]
    summary: dict[str, bool]


def sweep(params: Params, axis: str, grid, regime: Regime, *,
          curve: ReputationCurve | None = None) -> SweepResult:
    """Re-solve the regime along one parameter axis.

    Per-point failures (invalid parameter values, refused assumptions) are
    recorded inline and the sweep continues.  The summary flags whether the
    informative posterior and welfare are nondecreasing along the grid.
    """
    if axis not in _AXES:
        raise InvalidParams(f"axis must be one of {_AXES}")
    values = [float(v) for v in grid]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidParams("sweep grid must be strictly ascending")

    rows: list[dict[str, Any]] = []
    errors: list[dict[str, Any]] = []
    for v in values:
        kwargs = {"mu0": params.mu0, "tau": params.tau,
                  "theta": params.theta, "gamma": params.gamma}
        kwargs[axis] = v
        try:
            pt = Params(**kwargs)
            eq = solve_regime(pt, regime, curve=curve)
        except Exception as exc:  # recorded inline, sweep continues
            errors.append({"axis": axis, "value": v,
                           "error": type(exc).__name__, "message": str(exc)})
            continue
        row = equilibrium_row(pt, eq)
        rows.append(row)

    def nondecreasing(key: str) -> bool:
        vals = [r[key] for r in rows
                if isinstance(r[key], float) and not math.isnan(r[key])]
        return all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    summary = {
        "mu_info_nondecreasing": nondecreasing("mu_info"),
        "welfare_nondecreasing": nondecreasing("welfare"),
        "all_points_solved": not errors,
    }
    return SweepResult(axis=axis, grid=tuple(values), regime=regime,
                       rows=tuple(rows), errors=tuple(errors), summary=summary)


def _jsonable(v: Any) -> Any:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
    return v


def write_csv(rows, path, columns=CSV_COLUMNS) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _jsonable(row.get(k, "")) for k in columns})


def rows_to_csv_text(rows, columns=CSV_COLUMNS) -> str:
    import io

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns))
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _jsonable(row.get(k, "")) for k in columns})
    return buf.getvalue()


def to_jsonable(obj: Any) -> Any:
    """Recursively convert dataclasses/enums/arrays into JSON-safe values."""
    import dataclasses

    import numpy as np

    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(float(v)) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    return _jsonable(obj)


def write_json(obj: Any, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(obj), indent=2) + "\n", encoding="utf-8")
