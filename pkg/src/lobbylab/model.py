"""Core primitives for the lobbying game.

A lobbyist commits to an experiment mapping a binary state {A, B} to a
distribution over two recommendations.  A politician who either knows the
state (high ability, prior mass ``tau``) or not responds to the
recommendation; afterwards the public updates its belief about her
ability from whatever the transparency regime lets it observe.  The
politician weighs decision quality against that reputation with intensity
``theta`` (``inf`` means purely reputational preferences).

Everything here is a pure function of immutable value types; solvers and
oracles in the sibling modules consume these primitives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

#: Slack applied when validating probabilities that arrive from float
#: arithmetic.  Violations beyond the slack raise; values inside it are
#: snapped to the boundary (never silently clamped from farther away).
PROB_SLACK = 1e-12


class InvalidParams(ValueError):
    """A primitive violates its declared range beyond the 1e-12 slack."""


class AssumptionViolated(RuntimeError):
    """A solver precondition fails; the solver refuses rather than guesses."""


class SolverError(RuntimeError):
    """A root could not be bracketed where theory says it must exist."""


def _checked_prob(name: str, value: float, slack: float = PROB_SLACK) -> float:
    v = float(value)
    if math.isnan(v):
        raise InvalidParams(f"{name} is NaN")
    if v < -slack or v > 1.0 + slack:
        raise InvalidParams(f"{name}={value!r} outside [0, 1]")
    return min(max(v, 0.0), 1.0)


def _checked_open(name: str, value: float, lo: float, hi: float) -> float:
    v = float(value)
    if not (lo < v < hi):
        raise InvalidParams(f"{name}={value!r} outside open interval ({lo}, {hi})")
    return v


class Intent(Enum):
    REVEALED = "revealed"
    CONCEALED = "concealed"


class Consequence(Enum):
    REVEALED = "revealed"
    CONCEALED = "concealed"


class Persuasion(Enum):
    PRIVATE = "private"
    EXPERIMENT_PUBLIC = "experiment_public"
    FULLY_PUBLIC = "fully_public"


class Rec(Enum):
    """Recommendation labels; ``A`` is the one pointing at action a."""

    A = "rec_a"
    B = "rec_b"

    @property
    def other(self) -> "Rec":
        return Rec.B if self is Rec.A else Rec.A


class Lobbyist(Enum):
    A = "A"
    B = "B"

    @property
    def preferred_action(self) -> str:
        return "a" if self is Lobbyist.A else "b"


@dataclass(frozen=True)
class Regime:
    """Which pieces of the interaction the public can observe."""

    intent: Intent = Intent.REVEALED
    consequence: Consequence = Consequence.REVEALED
    persuasion: Persuasion = Persuasion.PRIVATE

    @property
    def name(self) -> str:
        if self.persuasion is not Persuasion.PRIVATE:
            return self.persuasion.value
        if self.intent is Intent.REVEALED and self.consequence is Consequence.REVEALED:
            return "baseline"
        if self.intent is Intent.CONCEALED and self.consequence is Consequence.REVEALED:
            return "concealed_intent"
        if self.intent is Intent.REVEALED:
            return "concealed_consequence"
        return "concealed_both"


BASELINE = Regime()
CONCEALED_INTENT = Regime(intent=Intent.CONCEALED)
CONCEALED_CONSEQUENCE = Regime(consequence=Consequence.CONCEALED)
CONCEALED_BOTH = Regime(intent=Intent.CONCEALED, consequence=Consequence.CONCEALED)
EXPERIMENT_PUBLIC = Regime(persuasion=Persuasion.EXPERIMENT_PUBLIC)
FULLY_PUBLIC = Regime(persuasion=Persuasion.FULLY_PUBLIC)

_REGIMES_BY_NAME = {
    "baseline": BASELINE,
    "concealed_intent": CONCEALED_INTENT,
    "concealed_consequence": CONCEALED_CONSEQUENCE,
    "concealed_both": CONCEALED_BOTH,
    "experiment_public": EXPERIMENT_PUBLIC,
    "fully_public": FULLY_PUBLIC,
}


def regime_by_name(name: str) -> Regime:
    key = name.strip().lower().replace("-", "_")
    try:
        return _REGIMES_BY_NAME[key]
    except KeyError:
        raise InvalidParams(f"unknown regime {name!r}; expected one of "
                            f"{sorted(_REGIMES_BY_NAME)}") from None


@dataclass(frozen=True)
class Params:
    """Primitive environment.

    mu0    prior probability that the state favours action a, in (0, 1/2)
    tau    prior probability of a high-ability politician, in (0, 1)
    theta  career-concern intensity, >= 0; ``math.inf`` is allowed and means
           the politician cares about reputation only
    gamma  prior probability that the lobbyist prefers a, in (0, 1); only
           meaningful when intent is concealed
    """

    mu0: float
    tau: float
    theta: float
    gamma: float = 0.5

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu0", _checked_open("mu0", self.mu0, 0.0, 0.5))
        object.__setattr__(self, "tau", _checked_open("tau", self.tau, 0.0, 1.0))
        theta = float(self.theta)
        if math.isnan(theta) or theta < 0:
            raise InvalidParams(f"theta={self.theta!r} must be >= 0 or inf")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "gamma", _checked_open("gamma", self.gamma, 0.0, 1.0))

    @property
    def odds_low(self) -> float:
        return (1.0 - self.tau) / self.tau


@dataclass(frozen=True)
class Experiment:
    """Conditional signal structure; fields are P(rec_a | state).

    Construction canonicalises labels so the posterior after ``rec_a`` is
    the (weakly) larger one, which for two states reduces to
    ``p_a_given_A >= p_a_given_B``.
    """

    p_a_given_A: float
    p_a_given_B: float

    def __post_init__(self) -> None:
        pa = _checked_prob("p_a_given_A", self.p_a_given_A)
        pb = _checked_prob("p_a_given_B", self.p_a_given_B)
        if pa < pb:
            pa, pb = 1.0 - pa, 1.0 - pb
        object.__setattr__(self, "p_a_given_A", pa)
        object.__setattr__(self, "p_a_given_B", pb)

    @property
    def p_b_given_A(self) -> float:
        return 1.0 - self.p_a_given_A

    @property
    def p_b_given_B(self) -> float:
        return 1.0 - self.p_a_given_B

    def p_rec(self, rec: Rec, state: str) -> float:
        p_a = self.p_a_given_A if state == "A" else self.p_a_given_B
        return p_a if rec is Rec.A else 1.0 - p_a

    def marginal(self, prior: float, rec: Rec) -> float:
        return prior * self.p_rec(rec, "A") + (1.0 - prior) * self.p_rec(rec, "B")

    @property
    def is_uninformative(self) -> bool:
        return self.p_a_given_A == self.p_a_given_B

    @classmethod
    def fully_revealing(cls) -> "Experiment":
        return cls(1.0, 0.0)

    @classmethod
    def uninformative_always_a(cls) -> "Experiment":
        return cls(1.0, 1.0)

    @classmethod
    def uninformative_always_b(cls) -> "Experiment":
        return cls(0.0, 0.0)

    @classmethod
    def from_informative_posterior(cls, prior: float, mu: float) -> "Experiment":
        """Experiment with p_a_given_A = 1 inducing posterior ``mu`` after rec_a."""
        if not (prior <= mu <= 1.0):
            raise InvalidParams(f"posterior {mu!r} must lie in [{prior}, 1]")
        p_a_given_B = prior * (1.0 - mu) / ((1.0 - prior) * mu)
        return cls(1.0, p_a_given_B)


def posterior(prior: float, exp: Experiment, rec: Rec) -> float | None:
    """P(state = A | rec) by Bayes' rule; ``None`` if the rec has zero mass."""
    top = prior * exp.p_rec(rec, "A")
    bot = top + (1.0 - prior) * exp.p_rec(rec, "B")
    if bot == 0.0:
        return None
    return top / bot


def quality_gain(mu: float) -> float:
    """Net decision-quality payoff from choosing a rather than b at posterior mu."""
    return 2.0 * mu - 1.0


@dataclass(frozen=True)
class PoliticianStrategy:
    """Probability of choosing action a after each recommendation."""

    p_after_a: float
    p_after_b: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_after_a", _checked_prob("p_after_a", self.p_after_a))
        object.__setattr__(self, "p_after_b", _checked_prob("p_after_b", self.p_after_b))

    def p_for(self, rec: Rec) -> float:
        return self.p_after_a if rec is Rec.A else self.p_after_b

    @property
    def is_obedient(self) -> bool:
        return self.p_after_a == 1.0 and self.p_after_b == 0.0

    @classmethod
    def obedient(cls) -> "PoliticianStrategy":
        return cls(1.0, 0.0)


@dataclass(frozen=True)
class ReputationProfile:
    """Public posterior of high ability after each action (on the regime's
    information set; for consequence-revealed regimes these are the
    reputations after the *correct* action-state pairs, mistakes carry
    reputation zero)."""

    rep_a: float
    rep_b: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "rep_a", _checked_prob("rep_a", self.rep_a))
        object.__setattr__(self, "rep_b", _checked_prob("rep_b", self.rep_b))


class CurveKind(Enum):
    LINEAR = "linear"
    USER_SUPPLIED = "user_supplied"


@dataclass(frozen=True)
class ReputationCurve:
    """Strictly increasing reputational payoff map f: [0,1] -> [0,1].

    ``value`` extends f linearly above 1 (slope ``slope_hi``) so fixed-point
    residuals stay monotone when a candidate mixing probability wanders
    outside [0, 1]; the extension never affects clamped strategies.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    kind: CurveKind
    slope_hi: float = 1.0

    def value(self, t: float) -> float:
        if t > 1.0:
            return 1.0 + self.slope_hi * (t - 1.0)
        if t < 0.0:
            return self.slope_hi * t
        return float(self.fn(t))

    def values(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        inside = np.clip(t, 0.0, 1.0)
        out = np.asarray(self.fn(inside), dtype=float)
        return np.where(t > 1.0, 1.0 + self.slope_hi * (t - 1.0), out)

    def derivative(self, t: float, h: float = 1e-6) -> float:
        if self.kind is CurveKind.LINEAR:
            return 1.0
        lo, hi = max(t - h, 0.0), min(t + h, 1.0)
        return (self.value(hi) - self.value(lo)) / (hi - lo)

    @property
    def is_linear(self) -> bool:
        return self.kind is CurveKind.LINEAR


def _validate_curve(fn: Callable[[np.ndarray], np.ndarray]) -> float:
    """Check endpoints and strict monotonicity; return the right-end slope."""
    grid = np.linspace(0.0, 1.0, 513)
    vals = np.asarray(fn(grid), dtype=float)
    if abs(vals[0]) > 1e-9 or abs(vals[-1] - 1.0) > 1e-9:
        raise InvalidParams("reputation curve must satisfy f(0)=0 and f(1)=1")
    if np.any(np.diff(vals) <= 0):
        raise InvalidParams("reputation curve must be strictly increasing")
    slope = (vals[-1] - vals[-2]) / (grid[-1] - grid[-2])
    return float(min(max(slope, 1e-6), 1e6))


def linear_curve() -> ReputationCurve:
    return ReputationCurve(fn=lambda t: np.asarray(t, dtype=float), kind=CurveKind.LINEAR)


def curve_from_callable(fn: Callable[[np.ndarray], np.ndarray]) -> ReputationCurve:
    """Wrap a numpy-elementwise callable as a reputation curve."""
    slope = _validate_curve(fn)
    return ReputationCurve(fn=fn, kind=CurveKind.USER_SUPPLIED, slope_hi=slope)


def curve_from_table(taus, values) -> ReputationCurve:
    """Monotone piecewise-linear curve from an ascending (tau, f(tau)) table."""
    xs = np.asarray(taus, dtype=float)
    ys = np.asarray(values, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise InvalidParams("curve table needs two equal-length 1-d columns")
    if np.any(np.diff(xs) <= 0):
        raise InvalidParams("curve table grid must be strictly ascending")
    fn = lambda t: np.interp(t, xs, ys)  # noqa: E731
    slope = _validate_curve(fn)
    return ReputationCurve(fn=fn, kind=CurveKind.USER_SUPPLIED, slope_hi=slope)


def curve_from_file(path) -> ReputationCurve:
    """Read a plain-text table: one "tau f(tau)" pair per line, ascending."""
    xs: list[float] = []
    ys: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise InvalidParams(f"curve file line {line!r} is not 'tau value'")
            xs.append(float(parts[0]))
            ys.append(float(parts[1]))
    return curve_from_table(xs, ys)


@dataclass(frozen=True)
class ReputationLoss:
    """Reputational payoff forgone by choosing a rather than b.

    ``bracket`` is (1-mu) f(rep_b) - mu f(rep_a); ``value`` is theta times
    that.  When theta is infinite only the bracket's sign is meaningful, so
    ``value`` is +/-inf (0 at exact indifference) and ``infinite_scale``
    flags it.
    """

    value: float
    bracket: float
    infinite_scale: bool


def reputation_loss(params: Params, mu: float, reps: ReputationProfile,
                    curve: ReputationCurve | None = None) -> ReputationLoss:
    curve = curve or linear_curve()
    bracket = (1.0 - mu) * curve.value(reps.rep_b) - mu * curve.value(reps.rep_a)
    if math.isinf(params.theta):
        value = 0.0 if bracket == 0.0 else math.copysign(math.inf, bracket)
        return ReputationLoss(value=value, bracket=bracket, infinite_scale=True)
    return ReputationLoss(value=params.theta * bracket, bracket=bracket,
                          infinite_scale=False)


def decision_margin(mu: float, reps: ReputationProfile, theta: float,
                    curve: ReputationCurve | None = None,
                    consequence: Consequence = Consequence.REVEALED) -> float:
    """Signed preference for a over b at posterior mu, reputations held fixed.

    Positive means a is strictly better.  Finite theta uses the raw utility
    scale; theta = inf uses the bracket scale (quality is then irrelevant).
    """
    curve = curve or linear_curve()
    fa, fb = curve.value(reps.rep_a), curve.value(reps.rep_b)
    if consequence is Consequence.REVEALED:
        bracket = (1.0 - mu) * fb - mu * fa
    else:
        bracket = fb - fa
    if math.isinf(theta):
        return -bracket
    return quality_gain(mu) - theta * bracket


@dataclass(frozen=True)
class BeliefBundle:
    """Public conjecture about experiments and responses, one slot per
    lobbyist type.  Single-lobbyist games leave the B side as ``None``."""

    experiment_A: Experiment | None = None
    strategy_A: PoliticianStrategy | None = None
    experiment_B: Experiment | None = None
    strategy_B: PoliticianStrategy | None = None

    def present(self) -> list[tuple[Lobbyist, Experiment, PoliticianStrategy]]:
        out = []
        if self.experiment_A is not None:
            out.append((Lobbyist.A, self.experiment_A, self.strategy_A))
        if self.experiment_B is not None:
            out.append((Lobbyist.B, self.experiment_B, self.strategy_B))
        if not out:
            raise InvalidParams("belief bundle is empty")
        return out


@dataclass(frozen=True)
class EquilibriumOutcome:
    """Full description of an equilibrium point.

    Single-lobbyist regimes leave the B-side fields as ``None``.
    ``posterior_a`` is the posterior the informing lobbyist induces for his
    own target state at his informative recommendation (NaN when neither
    type informs).  Payoffs are the low-type probabilities of each
    lobbyist's preferred action being taken, matching the payoff
    expressions used throughout the solvers.
    """

    experiment_A: Experiment | None
    experiment_B: Experiment | None
    strategy_A: PoliticianStrategy | None
    strategy_B: PoliticianStrategy | None
    posterior_a: float
    reputations: ReputationProfile
    welfare: float
    payoff_A: float | None
    payoff_B: float | None

    def to_bundle(self) -> "BeliefBundle":
        return BeliefBundle(experiment_A=self.experiment_A,
                            strategy_A=self.strategy_A,
                            experiment_B=self.experiment_B,
                            strategy_B=self.strategy_B)


def _low_action_prob(exp: Experiment, strat: PoliticianStrategy, state: str) -> float:
    """P(low type chooses a | state) under (exp, strat)."""
    if state == "A":
        return exp.p_a_given_A * strat.p_after_a + exp.p_b_given_A * strat.p_after_b
    return exp.p_a_given_B * strat.p_after_a + exp.p_b_given_B * strat.p_after_b


def reputation_profile(params: Params, regime: Regime, beliefs: BeliefBundle,
                       facing: Lobbyist | None = None,
                       rec: Rec | None = None) -> ReputationProfile:
    """Public posterior of high ability after each action, by exact
    enumeration over (ability, lobbyist type, state, recommendation, action)
    and conditioning on the regime's information set.

    ``facing`` names the lobbyist type the reputation conditions on when
    intent is revealed (the public then knows the type).  ``rec`` is
    required when the persuasion mode also publishes the recommendation.

    Zero-probability conditioning cells resolve by the refinement that the
    high type never errs: 1 for correct cells, 0 for mistakes.
    """
    tau = params.tau
    entries = beliefs.present()
    if regime.intent is Intent.REVEALED:
        if facing is None:
            if len(entries) != 1:
                raise InvalidParams("facing required: intent revealed with two types")
            entries = entries
        else:
            entries = [e for e in entries if e[0] is facing]
            if not entries:
                raise InvalidParams(f"no beliefs supplied for lobbyist {facing}")
        weights = [1.0]
    else:
        if len(entries) != 2:
            raise InvalidParams("concealed intent needs beliefs for both types")
        weights = [params.gamma if t is Lobbyist.A else 1.0 - params.gamma
                   for t, _, _ in entries]

    if regime.persuasion is Persuasion.FULLY_PUBLIC and rec is None:
        raise InvalidParams("rec required when recommendations are public")

    mu0 = params.mu0

    def cell(action: str, state: str) -> tuple[float, float]:
        """(P(high & cell), P(low & cell)) for the regime-visible cell."""
        p_state = mu0 if state == "A" else 1.0 - mu0
        hi = lo = 0.0
        for w, (_, exp, strat) in zip(weights, entries):
            if regime.persuasion is Persuasion.FULLY_PUBLIC:
                p_rec = exp.p_rec(rec, state)
                p_low_a = strat.p_for(rec)
                p_low = p_low_a if action == "a" else 1.0 - p_low_a
                hi += w * tau * p_state * p_rec * (1.0 if (action == "a") == (state == "A") else 0.0)
                lo += w * (1.0 - tau) * p_state * p_rec * p_low
            else:
                p_low_a = _low_action_prob(exp, strat, state)
                p_low = p_low_a if action == "a" else 1.0 - p_low_a
                hi += w * tau * p_state * (1.0 if (action == "a") == (state == "A") else 0.0)
                lo += w * (1.0 - tau) * p_state * p_low
        return hi, lo

    def ratio(action: str, states: list[str]) -> float:
        hi = lo = 0.0
        for s in states:
            h, l = cell(action, s)
            hi += h
            lo += l
        total = hi + lo
        if total == 0.0:
            # Off-path cell: high types never err, so a correct cell is
            # attributed to them; a mistake cell cannot contain them.
            correct = len(states) == 1 and (action == "a") == (states[0] == "A")
            return 1.0 if correct else 0.0
        return hi / total

    if regime.consequence is Consequence.REVEALED:
        rep_a = ratio("a", ["A"])
        rep_b = ratio("b", ["B"])
    else:
        rep_a = ratio("a", ["A", "B"])
        rep_b = ratio("b", ["A", "B"])
    return ReputationProfile(rep_a=rep_a, rep_b=rep_b)


def lobbyist_payoff(params: Params, exp: Experiment, strat: PoliticianStrategy,
                    preferred: Lobbyist | str = Lobbyist.A) -> float:
    """Probability the low-ability politician takes the preferred action.

    The high type's contribution (tau * prior of the preferred state) is the
    same for every experiment, so payoff comparisons ignore it.
    """
    p_a = (params.mu0 * _low_action_prob(exp, strat, "A")
           + (1.0 - params.mu0) * _low_action_prob(exp, strat, "B"))
    pref = preferred.preferred_action if isinstance(preferred, Lobbyist) else preferred
    return p_a if pref == "a" else 1.0 - p_a


def _low_correct_prob(mu0: float, exp: Experiment, strat: PoliticianStrategy) -> float:
    return (mu0 * _low_action_prob(exp, strat, "A")
            + (1.0 - mu0) * (1.0 - _low_action_prob(exp, strat, "B")))


def welfare(params: Params, beliefs: BeliefBundle) -> float:
    """Probability of a correct decision: tau plus the low type's share.

    With both lobbyist types present the low-type share is the gamma
    mixture across the per-type play.
    """
    entries = beliefs.present()
    if len(entries) == 1:
        _, exp, strat = entries[0]
        low = _low_correct_prob(params.mu0, exp, strat)
    else:
        low = 0.0
        for t, exp, strat in entries:
            w = params.gamma if t is Lobbyist.A else 1.0 - params.gamma
            low += w * _low_correct_prob(params.mu0, exp, strat)
    return params.tau + (1.0 - params.tau) * low
