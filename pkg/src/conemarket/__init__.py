"""Arbitrage-freeness of one-period scenario markets, state-price measures,
and a polyhedral cone toolkit (totality / nonannihilating verdicts)."""

from .errors import (
    ConeMarketError,
    DimensionCapExceeded,
    DimensionMismatch,
    EquivalenceViolation,
    InvalidParameter,
    IterationLimit,
    NegativePrice,
    NonPositiveProbability,
    NotPointed,
    NumericalBreakdown,
    ParseError,
    ProbabilityNotNormalized,
    RateBelowMinusOne,
)
from .lp import (
    FEASIBILITY_TOL,
    POSITIVITY_TOL,
    LpProblem,
    LpSolution,
    LpStatus,
    feasibility_residual,
    solve_lp,
)
from .market import (
    GainsMatrix,
    Market,
    Portfolio,
    discounted_gains,
    is_arbitrage_portfolio,
    market_from_csv,
    market_from_json,
    market_to_csv,
    market_to_json,
    parse_market_file,
    portfolio_cost,
    portfolio_value,
    validate_market,
)
from .ftap import (
    ArbitrageVerdict,
    EquivalenceReport,
    StatePriceMeasure,
    find_arbitrage,
    find_state_price,
    ftap_equivalence,
    martingale_measure,
    price_claim,
    verify_martingale,
)
from .cones import (
    PolyhedralCone,
    TotalityVerdict,
    distance_to_cone,
    dual_decomposition,
    dual_interior_membership,
    dual_membership,
    extreme_rays,
    is_nonannihilating,
    is_pointed,
    is_total,
    uniqueness_probe,
)
from .counterexample import (
    TruncatedExample,
    annihilating_functional,
    build_truncated,
    decay_report,
    no_arbitrage_at_truncation,
    separation_margin,
)

__version__ = "0.1.0"
