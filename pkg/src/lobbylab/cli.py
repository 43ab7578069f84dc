"""Command-line front end.

Subcommands: solve a regime at one parameter point, sweep a parameter
axis, verify an equilibrium with the brute-force oracle, print the 2x2
transparency welfare table (fig1), reproduce the worked example scenario
(example1), and solve the public-persuasion modes (public).  Results are
emitted as JSON (default) or CSV; every JSON payload embeds the config it
was produced from, and that payload can be fed back through ``--config``.

Exit codes: 0 ok, 2 invalid configuration, 3 refused assumption,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import analysis, equilibria, oracle, public_persuasion
from .best_response import politician_response
from .model import (
    CONCEALED_INTENT,
    AssumptionViolated,
    BeliefBundle,
    Experiment,
    InvalidParams,
    Lobbyist,
    Params,
    Persuasion,
    PoliticianStrategy,
    Rec,
    ReputationCurve,
    curve_from_file,
    linear_curve,
    posterior,
    regime_by_name,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ASSUMPTION = 3
EXIT_VERIFICATION = 4


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def _parse_theta(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    return float(t)


@dataclass
class RunConfig:
    """Validated run description; mirrors the CLI flags and the flat
    key=value config file format."""

    command: str
    mu0: float = 1 / 3
    tau: float = 0.5
    theta: float = 1.0
    gamma: float = 0.5
    regime: str = "baseline"
    format: str = ""
    out: str | None = None
    seed: int = 0
    grid: int = 300
    zoom: int = 100
    mc_samples: int = 0
    axis: str = "theta"
    sweep_from: float = 0.0
    sweep_to: float = 4.0
    steps: int = 17
    mode: str = "fully-public"
    curve: str = "linear"
    curve_file: str | None = None
    check_equivalence: bool = False
    extras: dict[str, Any] = field(default_factory=dict)

    def params(self) -> Params:
        return Params(mu0=self.mu0, tau=self.tau, theta=self.theta,
                      gamma=self.gamma)

    def reputation_curve(self) -> ReputationCurve:
        if self.curve_file:
            return curve_from_file(self.curve_file)
        name = self.curve.strip().lower()
        if name == "linear":
            return linear_curve()
        if name == "sqrt":
            from .model import curve_from_callable

            return curve_from_callable(np.sqrt)
        raise InvalidParams(f"unknown curve {self.curve!r}"
                            " (use linear, sqrt, or --curve-file)")

    def as_flat(self) -> dict[str, Any]:
        flat = {
            "command": self.command, "mu0": self.mu0, "tau": self.tau,
            "theta": "inf" if math.isinf(self.theta) else self.theta,
            "gamma": self.gamma, "regime": self.regime,
            "seed": self.seed, "grid": self.grid, "zoom": self.zoom,
            "mc_samples": self.mc_samples,
        }
        if self.format:
            flat["format"] = self.format
        if self.command == "sweep":
            flat.update(axis=self.axis, sweep_from=self.sweep_from,
                        sweep_to=self.sweep_to, steps=self.steps)
        if self.command == "public":
            flat.update(mode=self.mode, curve=self.curve)
            if self.curve_file:
                flat["curve_file"] = self.curve_file
        return flat


_FLOAT_KEYS = {"mu0", "tau", "gamma", "sweep_from", "sweep_to"}
_INT_KEYS = {"seed", "grid", "zoom", "mc_samples", "steps"}


def load_config_file(path: str) -> dict[str, Any]:
    """Flat key=value lines; also accepts a JSON result file and re-ingests
    its embedded ``config`` object."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    raw: dict[str, Any]
    if stripped.startswith("{"):
        payload = json.loads(text)
        raw = payload.get("config", payload)
    else:
        raw = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidParams(f"config line {line!r} is not key=value")
            key, value = line.split("=", 1)
            raw[key.strip()] = value.strip()
    out: dict[str, Any] = {}
    for key, value in raw.items():
        key = key.strip().lower().replace("-", "_")
        if key == "from":
            key = "sweep_from"
        if key == "to":
            key = "sweep_to"
        if key == "theta":
            out[key] = _parse_theta(str(value))
        elif key in _FLOAT_KEYS:
            out[key] = float(value)
        elif key in _INT_KEYS:
            out[key] = int(value)
        elif key == "check_equivalence":
            out[key] = str(value).strip().lower() in ("1", "true", "yes")
        else:
            out[key] = value
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lobbylab",
        description="Equilibria of the lobbyist-politician persuasion game "
                    "under transparency regimes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_regime=True):
        sp.add_argument("--config", help="key=value file or a previous JSON output")
        sp.add_argument("--mu0", type=float)
        sp.add_argument("--tau", type=float)
        sp.add_argument("--theta", type=_parse_theta,
                        help="career-concern weight; 'inf' allowed")
        sp.add_argument("--gamma", type=float)
        if with_regime:
            sp.add_argument("--regime", choices=[
                "baseline", "concealed-intent", "concealed-consequence",
                "concealed-both"])
        sp.add_argument("--format", choices=["json", "csv", "text"])
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--seed", type=int)

    sp = sub.add_parser("solve", help="solve one regime at one point")
    add_common(sp)

    sp = sub.add_parser("sweep", help="re-solve along one parameter axis")
    add_common(sp)
    sp.add_argument("--axis", choices=["theta", "gamma", "mu0", "tau"])
    sp.add_argument("--from", dest="sweep_from", type=float)
    sp.add_argument("--to", dest="sweep_to", type=float)
    sp.add_argument("--steps", type=int)

    sp = sub.add_parser("verify", help="solve then certify with the oracle")
    add_common(sp)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--zoom", type=int)
    sp.add_argument("--mc-samples", dest="mc_samples", type=int)

    sp = sub.add_parser("fig1", help="2x2 transparency welfare table")
    add_common(sp, with_regime=False)

    sp = sub.add_parser("example1", help="reproduce the worked example scenario")
    add_common(sp, with_regime=False)

    sp = sub.add_parser("public", help="public-persuasion optima")
    add_common(sp, with_regime=False)
    sp.add_argument("--mode", choices=["experiment-public", "fully-public"])
    sp.add_argument("--curve", choices=["linear", "sqrt"])
    sp.add_argument("--curve-file", dest="curve_file")
    sp.add_argument("--check-equivalence", dest="check_equivalence",
                    action="store_true", default=None)
    sp.add_argument("--grid", type=int)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key, value in vars(args).items():
        if key in ("config",) or value is None:
            continue
        values[key] = value
    values["command"] = args.command
    if "regime" in values and isinstance(values["regime"], str):
        values["regime"] = values["regime"].replace("-", "_")
    known = {f for f in RunConfig.__dataclass_fields__ if f != "extras"}
    extras = {k: v for k, v in values.items() if k not in known}
    fields = {k: v for k, v in values.items() if k in known}
    cfg = RunConfig(**fields)
    cfg.extras = extras
    return cfg


def _emit(cfg: RunConfig, payload: dict[str, Any], csv_rows=None,
          text: str | None = None) -> None:
    # Commands with a human-readable report default to it; data commands
    # default to JSON.
    fmt = cfg.format or ("text" if text is not None else "json")
    if fmt == "csv" and csv_rows is not None:
        body = analysis.rows_to_csv_text(csv_rows)
    elif fmt == "text" and text is not None:
        body = text
    else:
        body = json.dumps(analysis.to_jsonable(payload), indent=2) + "\n"
    if cfg.out:
        path = Path(cfg.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def _cmd_solve(cfg: RunConfig) -> int:
    params = cfg.params()
    regime = regime_by_name(cfg.regime)
    eq = equilibria.solve_regime(params, regime)
    row = analysis.equilibrium_row(params, eq)
    payload = {"config": cfg.as_flat(), "result": {
        "regime": eq.regime.name,
        "case": eq.case_label.value,
        "mu_info": eq.outcome.posterior_a,
        "welfare": eq.outcome.welfare,
        "payoff_A": eq.outcome.payoff_A,
        "payoff_B": eq.outcome.payoff_B,
        "defining_residual": eq.defining_residual,
        "experiment_A": eq.outcome.experiment_A,
        "experiment_B": eq.outcome.experiment_B,
        "strategy_A": eq.outcome.strategy_A,
        "strategy_B": eq.outcome.strategy_B,
        "reputations": eq.outcome.reputations,
    }}
    _emit(cfg, payload, csv_rows=[row])
    return EXIT_OK


def _cmd_sweep(cfg: RunConfig) -> int:
    params = cfg.params()
    regime = regime_by_name(cfg.regime)
    grid = np.linspace(cfg.sweep_from, cfg.sweep_to, cfg.steps)
    result = analysis.sweep(params, cfg.axis, grid, regime)
    payload = {"config": cfg.as_flat(), "result": {
        "axis": result.axis,
        "grid": list(result.grid),
        "summary": result.summary,
        "rows": list(result.rows),
        "errors": list(result.errors),
    }}
    _emit(cfg, payload, csv_rows=list(result.rows))
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    params = cfg.params()
    regime = regime_by_name(cfg.regime)
    eq = equilibria.solve_regime(params, regime)
    report = oracle.verify_equilibrium(params, eq, grid=cfg.grid,
                                       zoom=cfg.zoom,
                                       mc_samples=cfg.mc_samples,
                                       seed=cfg.seed)
    payload = {"config": cfg.as_flat(),
               "result": {"equilibrium": analysis.equilibrium_row(params, eq),
                          "report": report, "certified": report.certified}}
    _emit(cfg, payload)
    return EXIT_OK if report.certified else EXIT_VERIFICATION


def _cmd_fig1(cfg: RunConfig) -> int:
    params = cfg.params()
    table = analysis.figure1_table(params)
    rows = analysis.figure1_rows(params, table)
    lines = ["welfare by transparency cell (rows: intent; columns: consequence)"]
    for cell, value in table.cells().items():
        lines.append(f"  {cell} = {_fmt(value)}")
    for name, sign in table.signs().items():
        lines.append(f"  {name} = {sign}")
    payload = {"config": cfg.as_flat(),
               "result": {"cells": table.cells(), "signs": table.signs()}}
    _emit(cfg, payload, csv_rows=rows, text="\n".join(lines) + "\n")
    return EXIT_OK


_EXAMPLE_PARAMS = dict(mu0=1 / 3, tau=0.5, theta=math.inf, gamma=8 / 9)
_EXAMPLE_EXPERIMENT = Experiment(p_a_given_A=1.0, p_a_given_B=3 / 7)


def _cmd_example1(cfg: RunConfig) -> int:
    """Fixed-experiment scenario: purely reputation-minded politician, the
    a-leaning lobbyist's experiment pinned, compared across intent regimes."""
    params = Params(**_EXAMPLE_PARAMS)
    exp = _EXAMPLE_EXPERIMENT
    mu = posterior(params.mu0, exp, Rec.A)

    revealed = politician_response(params, exp)
    bundle = BeliefBundle(
        experiment_A=exp, strategy_A=PoliticianStrategy.obedient(),
        experiment_B=Experiment.uninformative_always_b(),
        strategy_B=PoliticianStrategy.obedient())
    concealed = politician_response(params, exp, regime=CONCEALED_INTENT,
                                    beliefs=bundle, facing=Lobbyist.A)
    residual = equilibria.concealed_intent_residual(params, exp)

    strat_rev = revealed.strategy
    welfare_revealed = (params.tau + (1.0 - params.tau) * (
        params.mu0 * exp.p_a_given_A * strat_rev.p_after_a
        + (1.0 - params.mu0) * (exp.p_a_given_B * (1.0 - strat_rev.p_after_a)
                                + exp.p_b_given_B)))
    welfare_concealed = (params.tau + (1.0 - params.tau)
                         * (params.mu0 + (1.0 - params.mu0) * exp.p_b_given_B))

    result = {
        "posterior_after_rec_a": mu,
        "revealed_intent_p_after_a": strat_rev.p_after_a,
        "concealed_intent_p_after_a": concealed.strategy.p_after_a,
        "concealed_intent_residual": residual,
        "welfare_intent_revealed": welfare_revealed,
        "welfare_intent_concealed": welfare_concealed,
        "welfare_loss_from_revealing_intent": welfare_concealed - welfare_revealed,
    }
    lines = [f"{key} = {_fmt(value)}" for key, value in result.items()]
    payload = {"config": cfg.as_flat(), "result": result}
    _emit(cfg, payload, text="\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_public(cfg: RunConfig) -> int:
    params = cfg.params()
    curve = cfg.reputation_curve()
    elasticity = public_persuasion.check_elasticity(curve, params.theta)
    if not elasticity.holds:
        raise AssumptionViolated(
            f"reputation curve elasticity {elasticity.witness_elasticity:.6g} at "
            f"tau={elasticity.witness_tau:.6g} exceeds bound {elasticity.bound:.6g}")
    mode = cfg.mode.replace("_", "-")
    if mode == "fully-public":
        sol = public_persuasion.solve_fully_public(params, curve)
    elif mode == "experiment-public":
        sol = public_persuasion.solve_experiment_public(params, curve)
    else:
        raise InvalidParams(f"unknown public mode {cfg.mode!r}")
    result: dict[str, Any] = {
        "mode": sol.mode.value,
        "mu_dagger_a": sol.mu_dagger_a,
        "lobbyist_payoff": sol.lobbyist_payoff,
        "experiment": sol.experiment,
        "elasticity_bound": elasticity.bound,
    }
    if cfg.check_equivalence and mode == "experiment-public":
        result["equivalence"] = public_persuasion.verify_experiment_public_equivalence(
            params, curve)
    payload = {"config": cfg.as_flat(), "result": result}
    _emit(cfg, payload)
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "fig1": _cmd_fig1,
    "example1": _cmd_example1,
    "public": _cmd_public,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except AssumptionViolated as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except (InvalidParams, ValueError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
