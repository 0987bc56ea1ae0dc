"""Arbitrage detection and state-price (martingale) measure construction.

Two LPs drive everything:

* arbitrage search: maximize the expected discounted gain of a strategy xi
  constrained to the unit box, subject to no scenario loss.  A strictly
  positive optimum yields a witness; positive homogeneity means the box
  does not affect the free/not-free classification.
* measure search: maximize the smallest scenario weight eps over all
  probability vectors q annihilating every gain column.  A strictly
  positive optimum is the max-margin state-price measure.

Exactly one of the two can succeed on any valid market; ``ftap_equivalence``
asserts that and raises ``EquivalenceViolation`` otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DimensionMismatch, EquivalenceViolation
from .lp import INF, LpProblem, LpStatus, POSITIVITY_TOL, solve_lp
from .market import GainsMatrix, Market, discounted_gains


@dataclass(frozen=True)
class ArbitrageVerdict:
    free: bool
    witness: Optional[tuple]       # risky strategy xi, present iff not free
    gain_expectation: object       # optimal LP objective


@dataclass(frozen=True)
class StatePriceMeasure:
    q: tuple                       # strictly positive, sums to 1, Y^T q = 0
    density: tuple                 # q / p, the Radon-Nikodym derivative
    margin: object                 # eps* = min scenario weight


def _positive(value, mode) -> bool:
    # Exact optima are classified exactly; float mode uses the shared threshold.
    if mode == "exact":
        return value > 0
    return value > POSITIVITY_TOL


def find_arbitrage(gains: GainsMatrix, mode: str = "float") -> ArbitrageVerdict:
    """Best expected gain over the no-loss strategies in the unit box."""
    n, d = gains.n_scenarios, gains.n_assets
    objective = [sum(p * row[i] for p, row in zip(gains.probs, gains.Y)) for i in range(d)]
    problem = LpProblem.build(
        objective=objective,
        constraint_matrix=list(gains.Y),
        relations=[">="] * n,
        rhs=[0] * n,
        lower_bounds=[-1] * d,
        upper_bounds=[1] * d,
    )
    sol = solve_lp(problem, mode)
    # xi = 0 is always feasible and the box bounds the LP, so it is Optimal.
    assert sol.status == LpStatus.OPTIMAL
    if _positive(sol.objective_value, mode):
        return ArbitrageVerdict(False, sol.point, sol.objective_value)
    return ArbitrageVerdict(True, None, sol.objective_value)


def find_state_price(gains: GainsMatrix, mode: str = "float") -> Optional[StatePriceMeasure]:
    """Max-margin probability vector annihilating the gain columns, if any."""
    n, d = gains.n_scenarios, gains.n_assets
    # Variables: q_1..q_n, eps.  max eps.
    rows = []
    relations = []
    rhs = []
    for i in range(d):
        rows.append([gains.Y[w][i] for w in range(n)] + [0])
        relations.append("=")
        rhs.append(0)
    rows.append([1] * n + [0])
    relations.append("=")
    rhs.append(1)
    for w in range(n):
        row = [0] * (n + 1)
        row[w] = 1
        row[n] = -1
        rows.append(row)
        relations.append(">=")
        rhs.append(0)
    problem = LpProblem.build(
        objective=[0] * n + [1],
        constraint_matrix=rows,
        relations=relations,
        rhs=rhs,
        lower_bounds=[0] * (n + 1),
    )
    sol = solve_lp(problem, mode)
    if sol.status != LpStatus.OPTIMAL or not _positive(sol.objective_value, mode):
        return None
    q = sol.point[:n]
    if mode == "exact":
        density = tuple(qi / Fraction(pi) for qi, pi in zip(q, gains.probs))
    else:
        density = tuple(qi / pi for qi, pi in zip(q, gains.probs))
    return StatePriceMeasure(q, density, sol.objective_value)


def martingale_measure(market: Market, mode: str = "float") -> Optional[StatePriceMeasure]:
    return find_state_price(discounted_gains(market), mode)


def verify_martingale(market: Market, measure: StatePriceMeasure):
    """Max over assets of |E_q[S^i/(1+r)] - pi^i|; valid measures give ~0."""
    if len(measure.q) != market.n_scenarios:
        raise DimensionMismatch("measure length differs from scenario count")
    r1 = 1 + market.rate
    worst = 0
    for i in range(market.n_assets):
        expected = sum(
            q * row[i] / r1 for q, row in zip(measure.q, market.scenario_prices)
        )
        resid = abs(expected - market.pi[i])
        if resid > worst:
            worst = resid
    return worst


def price_claim(market: Market, measure: StatePriceMeasure, claim):
    """Risk-neutral price: discounted expectation of the claim under q."""
    claim = tuple(claim)
    if len(claim) != market.n_scenarios or len(measure.q) != market.n_scenarios:
        raise DimensionMismatch("claim length differs from scenario count")
    return sum(q * c for q, c in zip(measure.q, claim)) / (1 + market.rate)


@dataclass(frozen=True)
class EquivalenceReport:
    verdict: ArbitrageVerdict
    measure: Optional[StatePriceMeasure]
    xor_holds: bool
    mode: str

    @property
    def free(self) -> bool:
        return self.verdict.free

    def to_json_dict(self) -> dict:
        return {
            "free": self.verdict.free,
            "witness": _ser(self.verdict.witness),
            "measure": None if self.measure is None else {
                "q": _ser(self.measure.q),
                "density": _ser(self.measure.density),
                "margin": _ser(self.measure.margin),
            },
            "xor_holds": self.xor_holds,
            "mode": self.mode,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _ser(x):
    if x is None:
        return None
    if isinstance(x, (tuple, list)):
        return [_ser(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def ftap_equivalence(market: Market, mode: str = "float") -> EquivalenceReport:
    """Run both searches independently and assert exactly one succeeds."""
    gains = discounted_gains(market)
    verdict = find_arbitrage(gains, mode)
    measure = find_state_price(gains, mode)
    xor = verdict.free == (measure is not None)
    if not xor:
        raise EquivalenceViolation(
            f"free={verdict.free} but measure "
            f"{'present' if measure else 'absent'} (mode={mode})"
        )
    return EquivalenceReport(verdict, measure, True, mode)
