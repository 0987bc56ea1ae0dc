"""One-period market model over a finite scenario space.

A market is (r, pi, S, p): bank rate, initial risky prices, scenario price
matrix and strictly positive scenario probabilities. The bond coordinate is
implicit everywhere (price 1 at t0, payoff 1+r), so the gains matrix never
contains a riskless column.

Entries may be floats or ``Fraction``s; arithmetic preserves exactness when
the inputs are rational.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NegativePrice,
    NonPositiveProbability,
    ParseError,
    ProbabilityNotNormalized,
    RateBelowMinusOne,
)
from .lp import POSITIVITY_TOL

_PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Market:
    rate: object                    # r > -1
    pi: tuple                       # length d, risky prices at t0
    scenario_prices: tuple          # n x d, risky prices per scenario at t1
    probs: tuple                    # length n, all > 0, sum 1

    @property
    def n_scenarios(self):
        return len(self.probs)

    @property
    def n_assets(self):
        return len(self.pi)


@dataclass(frozen=True)
class Portfolio:
    xi0: object          # bond position
    xi: tuple            # risky positions, length d


@dataclass(frozen=True)
class GainsMatrix:
    """Discounted net gains Y (n scenarios x d assets) plus the probabilities."""

    Y: tuple
    probs: tuple

    @property
    def n_scenarios(self):
        return len(self.Y)

    @property
    def n_assets(self):
        return len(self.Y[0]) if self.Y else 0


def _require_finite(x, what):
    if isinstance(x, float) and not math.isfinite(x):
        raise InvalidParameter(f"non-finite {what}")
    return x


def validate_market(rate, pi, scenario_prices, probs) -> Market:
    """Check all model invariants and return an immutable Market."""
    pi = tuple(pi)
    scenario_prices = tuple(tuple(row) for row in scenario_prices)
    probs = tuple(probs)

    _require_finite(rate, "rate")
    if rate <= -1:
        raise RateBelowMinusOne(f"rate must exceed -1, got {rate}")
    n = len(probs)
    d = len(pi)
    if n < 1 or d < 1:
        raise DimensionMismatch("need at least one scenario and one asset")
    if len(scenario_prices) != n:
        raise DimensionMismatch("scenario price matrix rows must match probabilities")
    for row in scenario_prices:
        if len(row) != d:
            raise DimensionMismatch("scenario price row length must match pi")
    for p in probs:
        _require_finite(p, "probability")
        if p <= 0:
            raise NonPositiveProbability(
                "zero-probability scenarios are rejected, not dropped"
            )
    total = sum(probs)
    if abs(total - 1) > _PROB_SUM_TOL:
        raise ProbabilityNotNormalized(f"probabilities sum to {total}")
    for x in pi:
        _require_finite(x, "price")
        if x < 0:
            raise NegativePrice("initial prices must be nonnegative")
    for row in scenario_prices:
        for x in row:
            _require_finite(x, "price")
            if x < 0:
                raise NegativePrice("scenario prices must be nonnegative")
    return Market(rate, pi, scenario_prices, probs)


def portfolio_cost(market: Market, pf: Portfolio):
    """Price of buying the portfolio at t0 (bond price normalized to 1)."""
    if len(pf.xi) != market.n_assets:
        raise DimensionMismatch("portfolio risky part must match market assets")
    return pf.xi0 + sum(x * p for x, p in zip(pf.xi, market.pi))


def portfolio_value(market: Market, pf: Portfolio) -> tuple:
    """Portfolio payoff per scenario at t1."""
    if len(pf.xi) != market.n_assets:
        raise DimensionMismatch("portfolio risky part must match market assets")
    bond = pf.xi0 * (1 + market.rate)
    return tuple(
        bond + sum(x * s for x, s in zip(pf.xi, row))
        for row in market.scenario_prices
    )


def _div(a, b):
    # keep rational inputs rational; true division would coerce ints to float
    if isinstance(a, float) or isinstance(b, float):
        return a / b
    return Fraction(a, 1) / Fraction(b, 1)


def discounted_gains(market: Market) -> GainsMatrix:
    """Y[w][i] = S[w][i] / (1+r) - pi[i]."""
    r1 = 1 + market.rate
    Y = tuple(
        tuple(_div(s, r1) - p for s, p in zip(row, market.pi))
        for row in market.scenario_prices
    )
    return GainsMatrix(Y, market.probs)


class ArbitrageCheck(NamedTuple):
    is_arbitrage: bool
    reason: str


def is_arbitrage_portfolio(market: Market, pf: Portfolio,
                           tol: float = POSITIVITY_TOL) -> ArbitrageCheck:
    """Nonpositive cost, no scenario loss, strict gain somewhere.

    "Almost everywhere" coincides with "every scenario" because validation
    rejects zero-probability scenarios.
    """
    cost = portfolio_cost(market, pf)
    if cost > tol:
        return ArbitrageCheck(False, f"cost {float(cost)} is positive")
    values = portfolio_value(market, pf)
    worst = min(values)
    if worst < -tol:
        return ArbitrageCheck(False, f"a scenario loses {float(worst)}")
    best = max(values)
    if best <= tol:
        return ArbitrageCheck(False, "payoff is zero in every scenario")
    return ArbitrageCheck(True, f"cost {float(cost)} <= 0, no losses, gain {float(best)}")


# ---------------------------------------------------------------------------
# serialization


def _num_from_json(x, what="number"):
    if isinstance(x, bool):
        raise ParseError(f"boolean where {what} expected")
    if isinstance(x, (int, float)):
        return _check_parsed(x, what)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot parse {what} {x!r}")
    raise ParseError(f"cannot parse {what} {x!r}")


def _check_parsed(x, what):
    if isinstance(x, float) and not math.isfinite(x):
        raise ParseError(f"non-finite {what} rejected")
    return x


def _reject_nonfinite(token):
    raise ParseError(f"non-finite number {token!r} rejected")


def asset_names(market: Market) -> list:
    return [f"S{i + 1}" for i in range(market.n_assets)]


def market_to_json_dict(market: Market) -> dict:
    def ser(x):
        return str(x) if isinstance(x, Fraction) else x

    return {
        "r": ser(market.rate),
        "assets": asset_names(market),
        "pi": [ser(x) for x in market.pi],
        "scenarios": [
            {"p": ser(p), "S": [ser(x) for x in row]}
            for p, row in zip(market.probs, market.scenario_prices)
        ],
    }


def market_from_json_dict(data: dict) -> Market:
    if not isinstance(data, dict):
        raise ParseError("market JSON must be an object")
    for key in ("r", "pi", "scenarios"):
        if key not in data:
            raise ParseError(f"market JSON missing key {key!r}")
    rate = _num_from_json(data["r"], "rate")
    pi = [_num_from_json(x, "price") for x in data["pi"]]
    probs = []
    S = []
    for sc in data["scenarios"]:
        if not isinstance(sc, dict) or "p" not in sc or "S" not in sc:
            raise ParseError("each scenario needs keys 'p' and 'S'")
        probs.append(_num_from_json(sc["p"], "probability"))
        S.append([_num_from_json(x, "price") for x in sc["S"]])
    return validate_market(rate, pi, S, probs)


def market_to_json(market: Market) -> str:
    return json.dumps(market_to_json_dict(market), indent=2)


def market_from_json(text: str) -> Market:
    try:
        data = json.loads(text, parse_constant=_reject_nonfinite)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno)
    return market_from_json_dict(data)


def market_to_csv(market: Market) -> str:
    """CSV layout: an r= line, a pi= line, a header, one row per scenario."""
    names = asset_names(market)
    lines = [
        f"r={market.rate}",
        "pi=" + ",".join(str(x) for x in market.pi),
        "p," + ",".join(names),
    ]
    for p, row in zip(market.probs, market.scenario_prices):
        lines.append(",".join(str(x) for x in (p, *row)))
    return "\n".join(lines) + "\n"


def _csv_num(token, line):
    token = token.strip()
    try:
        if "/" in token:
            return Fraction(token)
        value = float(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse number {token!r}", line=line)
    if not math.isfinite(value):
        raise ParseError(f"non-finite number {token!r} rejected", line=line)
    if value == int(value) and "e" not in token.lower() and "." not in token:
        return int(value)
    return value


def market_from_csv(text: str) -> Market:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise ParseError("market CSV needs r=, pi=, a header and scenarios")
    if not lines[0].startswith("r="):
        raise ParseError("first CSV line must be r=<number>", line=1)
    rate = _csv_num(lines[0][2:], 1)
    if not lines[1].startswith("pi="):
        raise ParseError("second CSV line must be pi=<numbers>", line=2)
    pi = [_csv_num(tok, 2) for tok in lines[1][3:].split(",")]
    header = [h.strip() for h in lines[2].split(",")]
    if not header or header[0] != "p":
        raise ParseError("third CSV line must be the header p,<asset names>", line=3)
    if len(header) - 1 != len(pi):
        raise ParseError("header asset count differs from pi length", line=3)
    probs = []
    S = []
    for k, ln in enumerate(lines[3:], start=4):
        toks = ln.split(",")
        if len(toks) != len(header):
            raise ParseError("scenario row width differs from header", line=k)
        probs.append(_csv_num(toks[0], k))
        S.append([_csv_num(t, k) for t in toks[1:]])
    return validate_market(rate, pi, S, probs)


def parse_market_file(path: str) -> Market:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".csv"):
        return market_from_csv(text)
    return market_from_json(text)
