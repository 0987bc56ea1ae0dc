"""Exception hierarchy shared by all conemarket modules.

Every error carries a short machine-readable ``code`` used by the CLI when
mapping failures to ``{"error": code, "detail": ...}`` on stderr.
"""


class ConeMarketError(Exception):
    code = "error"


class DimensionMismatch(ConeMarketError):
    code = "dimension_mismatch"


class InvalidParameter(ConeMarketError):
    code = "invalid_parameter"


class NumericalBreakdown(ConeMarketError):
    """Float-mode pivot too small to trust; retry the solve in exact mode."""

    code = "numerical_breakdown"


class IterationLimit(ConeMarketError):
    code = "iteration_limit"


class RateBelowMinusOne(ConeMarketError):
    code = "rate_below_minus_one"


class NonPositiveProbability(ConeMarketError):
    code = "non_positive_probability"


class ProbabilityNotNormalized(ConeMarketError):
    code = "probability_not_normalized"


class NegativePrice(ConeMarketError):
    code = "negative_price"


class EquivalenceViolation(ConeMarketError):
    """Arbitrage witness and state-price measure both present or both absent.

    This is never a valid market state; it signals a solver bug or a
    tolerance failure in float mode.
    """

    code = "equivalence_violation"


class NotPointed(ConeMarketError):
    code = "not_pointed"


class DimensionCapExceeded(ConeMarketError):
    code = "dimension_cap_exceeded"


class ParseError(ConeMarketError):
    code = "parse_error"

    def __init__(self, detail, line=None, column=None):
        self.detail = detail
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{detail}{loc}")
