"""Finite truncations of the infinite-dimensional failure example.

The strategy subspace is spanned by vectors of the form
e_{2n} - (1/(2n)) e_{2n-1} inside R^{2N} with the nonnegative orthant as
profit cone.  Every truncation is arbitrage free, yet the best uniform
lower bound on an annihilating positive functional (with sup-norm at most
one) is exactly 1/(2N): the margin decays to zero as N grows, which is why
the subspace must stay finite-dimensional for the measure existence half
to survive.

Annihilation against the generators forces nu_{2n} = nu_{2n-1} / (2n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParameter
from .ftap import find_arbitrage
from .lp import LpProblem, LpStatus, solve_lp
from .market import GainsMatrix


@dataclass(frozen=True)
class TruncatedExample:
    N: int
    dim: int
    subspace_generators: tuple   # N rows of length 2N


def build_truncated(N: int) -> TruncatedExample:
    if N < 1:
        raise InvalidParameter("truncation level must be at least 1")
    gens = []
    for n in range(1, N + 1):
        row = [Fraction(0)] * (2 * N)
        row[2 * n - 1] = Fraction(1)                 # column 2n, 1-based
        row[2 * n - 2] = Fraction(-1, 2 * n)         # column 2n-1
        gens.append(tuple(row))
    return TruncatedExample(N, 2 * N, tuple(gens))


def gains_matrix(example: TruncatedExample) -> GainsMatrix:
    """Generators as gain columns: 2N scenarios, N strategies, uniform p."""
    n_scen = example.dim
    Y = tuple(
        tuple(gen[w] for gen in example.subspace_generators)
        for w in range(n_scen)
    )
    probs = (Fraction(1, n_scen),) * n_scen
    return GainsMatrix(Y, probs)


def no_arbitrage_at_truncation(N: int, mode: str = "exact") -> bool:
    return find_arbitrage(gains_matrix(build_truncated(N)), mode).free


def _margin_lp(example: TruncatedExample):
    """Margin LP after eliminating the forced even coordinates.

    Full problem: max eps s.t. nu orthogonal to every generator,
    0 <= nu_j <= 1, nu_j >= eps.  Annihilation pins nu_{2n} to
    nu_{2n-1}/(2n), so only the odd coordinates and eps remain:
    the binding margin rows become 2n*eps <= nu_{2n-1}.
    """
    N = example.N
    rows = []
    rhs = []
    for n in range(1, N + 1):
        row = [0] * (N + 1)
        row[n - 1] = -1
        row[N] = 2 * n
        rows.append(row)
        rhs.append(0)
    return LpProblem.build(
        objective=[0] * N + [1],
        constraint_matrix=rows,
        relations=["<="] * N,
        rhs=rhs,
        lower_bounds=[0] * (N + 1),
        upper_bounds=[1] * (N + 1),
    )


def annihilating_functional(N: int, mode: str = "exact"):
    """(margin, nu): the max-margin annihilating functional in [0,1]^{2N}."""
    example = build_truncated(N)
    sol = solve_lp(_margin_lp(example), mode)
    assert sol.status == LpStatus.OPTIMAL
    odd = sol.point[:N]
    nu = []
    for n in range(1, N + 1):
        v = odd[n - 1]
        nu.append(v)
        nu.append(v / (2 * n) if mode == "float" else v * Fraction(1, 2 * n))
    return sol.objective_value, tuple(nu)


def separation_margin(N: int, mode: str = "exact"):
    """Best uniform lower bound eps*(N) on an annihilating functional."""
    return annihilating_functional(N, mode)[0]


@dataclass(frozen=True)
class DecayRow:
    N: int
    margin: object
    analytic: object        # 1/(2N)
    arbitrage_free: bool


@dataclass(frozen=True)
class DecayReport:
    rows: tuple

    def to_json_dict(self) -> dict:
        def ser(x):
            return str(x) if isinstance(x, Fraction) else x

        return {
            "rows": [
                {
                    "N": r.N,
                    "margin": ser(r.margin),
                    "analytic": ser(r.analytic),
                    "arbitrage_free": r.arbitrage_free,
                }
                for r in self.rows
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_csv(self) -> str:
        lines = ["N,margin,analytic,arbitrage_free"]
        for r in self.rows:
            lines.append(f"{r.N},{r.margin},{r.analytic},{str(r.arbitrage_free).lower()}")
        return "\n".join(lines) + "\n"


def decay_report(N_max: int, mode: str = "exact") -> DecayReport:
    if N_max < 1:
        raise InvalidParameter("N_max must be at least 1")
    rows = []
    for N in range(1, N_max + 1):
        margin = separation_margin(N, mode)
        analytic = Fraction(1, 2 * N) if mode == "exact" else 1.0 / (2 * N)
        rows.append(DecayRow(N, margin, analytic, no_arbitrage_at_truncation(N, mode)))
    return DecayReport(tuple(rows))
