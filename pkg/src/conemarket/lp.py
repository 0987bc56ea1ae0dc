"""Dense linear-programming engine: two-phase simplex with Bland's rule.

Two arithmetic modes share one code path:

* ``float``  -- the fast path; feasibility residuals stay below
  ``FEASIBILITY_TOL``.
* ``exact``  -- arbitrary-precision rationals (gmpy2 ``mpq``); returned
  points are exactly feasible and this mode is the oracle of record.

Problem sizes here are tiny (at most a few hundred variables), so the
tableau is dense and the implementation favours auditability over speed.
The pivot update does skip structurally zero entries, which keeps the
very sparse counterexample LPs cheap at rational precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from gmpy2 import mpq

from .errors import DimensionMismatch, InvalidParameter, IterationLimit, NumericalBreakdown

#: Maximum constraint violation accepted from a float-mode Optimal point.
FEASIBILITY_TOL = 1e-9

#: Values above this threshold count as strictly positive in every verdict
#: downstream (arbitrage gains, measure margins, cone pairings).
POSITIVITY_TOL = 1e-9

#: Float pivots below this magnitude abort the solve with NumericalBreakdown.
PIVOT_MIN = 1e-12

INF = float("inf")

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)

# Float-mode pivot-eligibility threshold: column entries in (PIVOT_MIN, this]
# are too small to divide by but too large to declare structurally zero.
_RATIO_TOL = 1e-9


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _exact(x):
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidParameter("non-finite coefficient in exact mode")
        return mpq(Fraction(x))
    return mpq(x)


def _as_fraction(x):
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass(frozen=True)
class LpProblem:
    """max objective . x  subject to  constraint_matrix x {<=,=,>=} rhs
    and lower_bounds <= x <= upper_bounds (entries may be +-inf)."""

    objective: tuple
    constraint_matrix: tuple
    relations: tuple
    rhs: tuple
    lower_bounds: tuple
    upper_bounds: tuple

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(self.objective))
        object.__setattr__(
            self, "constraint_matrix", tuple(tuple(row) for row in self.constraint_matrix)
        )
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        object.__setattr__(self, "lower_bounds", tuple(self.lower_bounds))
        object.__setattr__(self, "upper_bounds", tuple(self.upper_bounds))

        m = len(self.objective)
        k = len(self.rhs)
        if len(self.constraint_matrix) != k or len(self.relations) != k:
            raise DimensionMismatch("constraint rows, relations and rhs must have equal length")
        for row in self.constraint_matrix:
            if len(row) != m:
                raise DimensionMismatch("constraint row length differs from objective length")
        if len(self.lower_bounds) != m or len(self.upper_bounds) != m:
            raise DimensionMismatch("bound vectors must match the number of variables")
        for rel in self.relations:
            if rel not in _RELATIONS:
                raise InvalidParameter(f"unknown relation {rel!r}")
        for l, u in zip(self.lower_bounds, self.upper_bounds):
            if l > u:
                raise InvalidParameter("lower bound exceeds upper bound")

    @classmethod
    def build(cls, objective, constraint_matrix, relations, rhs,
              lower_bounds=None, upper_bounds=None):
        m = len(objective)
        if lower_bounds is None:
            lower_bounds = (-INF,) * m
        if upper_bounds is None:
            upper_bounds = (INF,) * m
        return cls(objective, constraint_matrix, relations, rhs, lower_bounds, upper_bounds)

    @property
    def n_vars(self):
        return len(self.objective)

    @property
    def n_rows(self):
        return len(self.rhs)


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    point: Optional[tuple]
    objective_value: Optional[object]
    pivots: int = 0


def feasibility_residual(problem: LpProblem, point) -> object:
    """Largest violation of any constraint or bound at ``point`` (0 if feasible)."""
    if len(point) != problem.n_vars:
        raise DimensionMismatch("point length differs from problem variables")
    worst = 0
    for row, rel, b in zip(problem.constraint_matrix, problem.relations, problem.rhs):
        lhs = sum(a * x for a, x in zip(row, point))
        if rel == LE:
            v = lhs - b
        elif rel == GE:
            v = b - lhs
        else:
            v = abs(lhs - b)
        if v > worst:
            worst = v
    for x, l, u in zip(point, problem.lower_bounds, problem.upper_bounds):
        if l != -INF and l - x > worst:
            worst = l - x
        if u != INF and x - u > worst:
            worst = x - u
    return worst


def _pivot(T, r, basis, p, q, zero, one):
    """Pivot on row p, column q; updates the reduced-cost row r in place."""
    prow = T[p]
    piv = prow[q]
    if piv != one:
        inv = one / piv
        prow = [x * inv for x in prow]
        T[p] = prow
    nz = [j for j, x in enumerate(prow) if x != zero]
    for i, row in enumerate(T):
        if i == p:
            continue
        f = row[q]
        if f != zero:
            for j in nz:
                row[j] -= f * prow[j]
            row[q] = zero
    f = r[q]
    if f != zero:
        for j in nz:
            r[j] -= f * prow[j]
        r[q] = zero
    basis[p] = q


def _reduced_costs(cvec, T, basis, zero):
    r = list(cvec) + [zero]
    for i, bi in enumerate(basis):
        f = cvec[bi]
        if f != zero:
            row = T[i]
            for j, x in enumerate(row):
                if x != zero:
                    r[j] -= f * x
    return r


def _iterate(T, r, basis, allowed, exact, zero, one, budget, spent):
    """Run simplex pivots until optimal/unbounded. Returns (status, pivots)."""
    enter_tol = zero if exact else _RATIO_TOL
    pivots = spent
    ncols = len(allowed)
    while True:
        q = None
        for j in range(ncols):
            if allowed[j] and r[j] > enter_tol:
                q = j
                break
        if q is None:
            return "optimal", pivots
        best = None
        best_ratio = None
        tiny_seen = False
        for i, row in enumerate(T):
            a = row[q]
            if exact:
                ok = a > zero
            else:
                ok = a > _RATIO_TOL
                if not ok and a > PIVOT_MIN:
                    tiny_seen = True
            if ok:
                ratio = row[-1] / a
                if best is None or ratio < best_ratio:
                    best, best_ratio = i, ratio
                elif ratio == best_ratio and basis[i] < basis[best]:
                    best = i
        if best is None:
            if tiny_seen:
                raise NumericalBreakdown(
                    "all eligible pivots below %.0e; retry in exact mode" % PIVOT_MIN
                )
            return "unbounded", pivots
        _pivot(T, r, basis, best, q, zero, one)
        pivots += 1
        if pivots > budget:
            raise IterationLimit(f"simplex exceeded the pivot budget of {budget}")


def solve_lp(problem: LpProblem, mode: str = "float",
             max_pivots: int = 100_000) -> LpSolution:
    """Solve ``problem`` (maximization). ``mode`` is ``"float"`` or ``"exact"``."""
    if mode not in ("float", "exact"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    exact = mode == "exact"
    num = _exact if exact else float
    zero = num(0)
    one = num(1)

    c = [num(x) for x in problem.objective]
    A = [[num(x) for x in row] for row in problem.constraint_matrix]
    b = [num(x) for x in problem.rhs]
    m = problem.n_vars

    # Shift/split variables so every tableau variable is >= 0.
    cols = []  # (orig var, sign, offset): x_j = offset + sign * t
    cap_rows = []  # (col, cap): t_col <= cap, from two-sided bounds
    for j in range(m):
        l = problem.lower_bounds[j]
        u = problem.upper_bounds[j]
        l_inf = l == -INF
        u_inf = u == INF
        if l_inf and u_inf:
            cols.append((j, 1, zero))
            cols.append((j, -1, zero))
        elif not l_inf:
            ci = len(cols)
            cols.append((j, 1, num(l)))
            if not u_inf:
                cap_rows.append((ci, num(u) - num(l)))
        else:
            cols.append((j, -1, num(u)))
    ns = len(cols)

    rows = []
    for i in range(len(b)):
        coeffs = [zero] * ns
        rhs = b[i]
        ai = A[i]
        for ci, (j, s, off) in enumerate(cols):
            aij = ai[j]
            if aij != zero:
                coeffs[ci] = aij if s == 1 else -aij
                if off != zero:
                    rhs -= aij * off
        rows.append((coeffs, problem.relations[i], rhs))
    for ci, cap in cap_rows:
        coeffs = [zero] * ns
        coeffs[ci] = one
        rows.append((coeffs, LE, cap))

    # Standard form: nonnegative rhs, slack per inequality, artificial
    # where no slack can start basic.
    fixed = []
    for coeffs, rel, rhs in rows:
        if rhs < zero:
            coeffs = [-x for x in coeffs]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        fixed.append((coeffs, rel, rhs))
    nslack = sum(1 for _, rel, _ in fixed if rel != EQ)
    nart = sum(1 for _, rel, _ in fixed if rel != LE)
    ncols = ns + nslack + nart
    T = []
    basis = []
    si = ns
    ai_col = ns + nslack
    for coeffs, rel, rhs in fixed:
        row = list(coeffs) + [zero] * (nslack + nart) + [rhs]
        if rel != EQ:
            row[si] = one if rel == LE else -one
            this_slack = si
            si += 1
        if rel == LE:
            basis.append(this_slack)
        else:
            row[ai_col] = one
            basis.append(ai_col)
            ai_col += 1
        T.append(row)
    allowed = [True] * ncols
    pivots = 0

    if nart:
        cvec = [zero] * ncols
        for j in range(ns + nslack, ncols):
            cvec[j] = -one
        r = _reduced_costs(cvec, T, basis, zero)
        _, pivots = _iterate(T, r, basis, allowed, exact, zero, one, max_pivots, pivots)
        infeas = r[-1]  # r[-1] tracks -(objective) = sum of artificials
        bad = infeas > zero if exact else infeas > 1e-7
        if bad:
            return LpSolution(LpStatus.INFEASIBLE, None, None, pivots)
        # Pivot leftover artificials out of the basis where possible; rows
        # whose non-artificial entries are all zero are redundant and inert.
        art_lo = ns + nslack
        for i in range(len(T)):
            if basis[i] >= art_lo:
                for j in range(art_lo):
                    x = T[i][j]
                    if (x != zero) if exact else (abs(x) > _RATIO_TOL):
                        _pivot(T, r, basis, i, j, zero, one)
                        pivots += 1
                        break
        for j in range(art_lo, ncols):
            allowed[j] = False

    cvec = [zero] * ncols
    for ci, (j, s, _off) in enumerate(cols):
        cj = c[j]
        if cj != zero:
            cvec[ci] = cj if s == 1 else -cj
    r = _reduced_costs(cvec, T, basis, zero)
    status, pivots = _iterate(T, r, basis, allowed, exact, zero, one, max_pivots, pivots)
    if status == "unbounded":
        return LpSolution(LpStatus.UNBOUNDED, None, None, pivots)

    tval = {}
    for i, bi in enumerate(basis):
        tval[bi] = T[i][-1]
    x = [zero] * m
    for ci, (j, s, off) in enumerate(cols):
        v = tval.get(ci, zero)
        x[j] += off + (v if s == 1 else -v)
    objective = sum(cj * xj for cj, xj in zip(c, x))
    if exact:
        point = tuple(_as_fraction(v) for v in x)
        objective = _as_fraction(objective)
    else:
        point = tuple(x)
    return LpSolution(LpStatus.OPTIMAL, point, objective, pivots)
