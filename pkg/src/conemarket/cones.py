"""Finitely generated cone geometry: duality, pointedness, totality and
nonannihilating verdicts, ray enumeration, and the finite-dimensional
uniqueness probe.

A test cone sits inside the dual of a profit cone K.  It is *total* when
nonnegative pairings against all of it force membership in K, and
*nonannihilating* when each of its elements pairs strictly positively with
every nonzero element of K.  At dimension <= 8 totality is decided exactly
by enumerating the rays of the test cone's predual (double description);
beyond that only a sampled three-valued verdict is offered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import nnls

from .errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    InvalidParameter,
    NotPointed,
)
from .lp import INF, LpProblem, LpStatus, POSITIVITY_TOL, solve_lp

#: Exact ray enumeration is exponential; above this dimension it is refused.
RAY_DIM_CAP = 8

_DEDUP_TOL = 1e-12
_MEMBERSHIP_DIST_TOL = 1e-6


@dataclass(frozen=True)
class PolyhedralCone:
    """Cone generated by finitely many nonzero vectors, unit 1-norm each."""

    dim: int
    generators: tuple

    @classmethod
    def from_generators(cls, generators, dim=None) -> "PolyhedralCone":
        gens = [tuple(g) for g in generators]
        if not gens:
            raise InvalidParameter("a cone needs at least one generator")
        if dim is None:
            dim = len(gens[0])
        normalized = []
        for g in gens:
            if len(g) != dim:
                raise DimensionMismatch("generator length differs from cone dimension")
            norm = sum(abs(x) for x in g)
            if norm == 0:
                raise InvalidParameter("zero generator rejected")
            g = tuple(_norm_div(x, norm) for x in g)
            if not any(_close(g, h) for h in normalized):
                normalized.append(g)
        return cls(dim, tuple(normalized))

    @classmethod
    def orthant(cls, dim: int) -> "PolyhedralCone":
        eye = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        return cls.from_generators(eye, dim)

    def to_json_dict(self) -> dict:
        return {"dim": self.dim, "generators": [[float(x) for x in g] for g in self.generators]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PolyhedralCone":
        return cls.from_generators(data["generators"], data.get("dim"))


def _norm_div(x, norm):
    if isinstance(x, float) or isinstance(norm, float):
        return x / norm
    return Fraction(x, 1) / Fraction(norm, 1)


def _close(g, h):
    return len(g) == len(h) and all(abs(a - b) < _DEDUP_TOL for a, b in zip(g, h))


def _pair(y, g):
    return sum(a * b for a, b in zip(y, g))


def _check_dim(cone: PolyhedralCone, y):
    if len(y) != cone.dim:
        raise DimensionMismatch("vector length differs from cone dimension")


def dual_membership(cone: PolyhedralCone, y, tol: float = POSITIVITY_TOL) -> bool:
    """y in K*: nonnegative pairing with every generator."""
    _check_dim(cone, y)
    return all(_pair(y, g) >= -tol for g in cone.generators)


def dual_interior_membership(cone: PolyhedralCone, y, tol: float = POSITIVITY_TOL) -> bool:
    """y in int K*: strictly positive pairing with every generator.

    Valid characterization only for pointed cones, which is checked.
    """
    _check_dim(cone, y)
    verdict = is_pointed(cone)
    if not verdict.pointed:
        raise NotPointed("dual interior membership needs a pointed cone")
    return all(_pair(y, g) > tol for g in cone.generators)


@dataclass(frozen=True)
class PointednessVerdict:
    pointed: bool
    witness: Optional[tuple]   # u with u and -u both in K, when not pointed


def is_pointed(cone: PolyhedralCone) -> PointednessVerdict:
    """K is pointed iff 0 has no nontrivial nonnegative generator combination."""
    g = len(cone.generators)
    rows = [[gen[i] for gen in cone.generators] for i in range(cone.dim)]
    problem = LpProblem.build(
        objective=[1] * g,
        constraint_matrix=rows,
        relations=["="] * cone.dim,
        rhs=[0] * cone.dim,
        lower_bounds=[0] * g,
        upper_bounds=[1] * g,
    )
    sol = solve_lp(problem, "exact")
    assert sol.status == LpStatus.OPTIMAL
    if sol.objective_value == 0:
        return PointednessVerdict(True, None)
    # Any generator with positive weight lies on a line inside the cone:
    # -lam_j g_j is the sum of the remaining terms.
    j = next(i for i, lam in enumerate(sol.point) if lam > 0)
    return PointednessVerdict(False, cone.generators[j])


def _in_cone_exact(vec, generators) -> bool:
    """vec in cone(generators), decided by exact feasibility LP."""
    dim = len(vec)
    g = len(generators)
    rows = [[gen[i] for gen in generators] for i in range(dim)]
    problem = LpProblem.build(
        objective=[0] * g,
        constraint_matrix=rows,
        relations=["="] * dim,
        rhs=list(vec),
        lower_bounds=[0] * g,
    )
    return solve_lp(problem, "exact").status == LpStatus.OPTIMAL


def cone_contains(cone: PolyhedralCone, y) -> bool:
    """Exact membership of y in the cone itself (not its dual)."""
    _check_dim(cone, y)
    return _in_cone_exact(tuple(Fraction(x) for x in y),
                          [tuple(Fraction(x) for x in g) for g in cone.generators])


def distance_to_cone(cone: PolyhedralCone, y) -> float:
    """Euclidean distance from y to the cone, via nonnegative least squares."""
    _check_dim(cone, y)
    A = np.array([[float(x) for x in g] for g in cone.generators], dtype=float).T
    _, resid = nnls(A, np.asarray([float(v) for v in y], dtype=float))
    return float(resid)


# ---------------------------------------------------------------------------
# ray enumeration (double description)


def _exact_vectors(vectors):
    return [tuple(Fraction(x) for x in v) for v in vectors]


def _normalize_exact(v):
    norm = sum(abs(x) for x in v)
    if norm == 0:
        return None
    return tuple(x / norm for x in v)


def _prune_redundant(rays):
    """Drop rays expressible as nonnegative combinations of the others."""
    rays = list(rays)
    i = 0
    while i < len(rays):
        rest = rays[:i] + rays[i + 1:]
        if rest and _in_cone_exact(rays[i], rest):
            rays.pop(i)
        else:
            i += 1
    return rays


def _extreme_rays_exact(halfspaces, dim):
    rays = []
    for i in range(dim):
        e = [Fraction(0)] * dim
        e[i] = Fraction(1)
        rays.append(tuple(e))
        e2 = list(e)
        e2[i] = Fraction(-1)
        rays.append(tuple(e2))
    for a in halfspaces:
        plus, zero, minus = [], [], []
        for r in rays:
            p = _pair(a, r)
            (plus if p > 0 else zero if p == 0 else minus).append((r, p))
        new = [r for r, _ in plus] + [r for r, _ in zero]
        for rp, pp in plus:
            for rm, pm in minus:
                combo = tuple(pp * x - pm * y for x, y in zip(rm, rp))
                combo = _normalize_exact(combo)
                if combo is not None:
                    new.append(combo)
        # dedupe after 1-norm normalization, then drop redundant rays
        seen = {}
        for r in new:
            r = _normalize_exact(r)
            if r is not None:
                seen.setdefault(r, None)
        rays = _prune_redundant(list(seen))
        if not rays:
            break
    return rays


def extreme_rays(halfspaces, exact: bool = False):
    """Generators of {u : <a_j, u> >= 0 for all j}; dimension capped at 8."""
    hs = [tuple(h) for h in halfspaces]
    if not hs:
        raise InvalidParameter("need at least one halfspace normal")
    dim = len(hs[0])
    if any(len(h) != dim for h in hs):
        raise DimensionMismatch("halfspace normals differ in length")
    if dim > RAY_DIM_CAP:
        raise DimensionCapExceeded(f"ray enumeration capped at dimension {RAY_DIM_CAP}")
    rays = _extreme_rays_exact(_exact_vectors(hs), dim)
    if exact:
        return rays
    return [tuple(float(x) for x in r) for r in rays]


# ---------------------------------------------------------------------------
# totality / nonannihilating


PROVED_TOTAL = "ProvedTotal"
REFUTED = "RefutedWithWitness"
NO_COUNTEREXAMPLE = "NoCounterexampleFound"


@dataclass(frozen=True)
class TotalityVerdict:
    status: str
    witness: Optional[tuple]
    samples_used: int

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else [float(x) for x in self.witness],
            "samples_used": self.samples_used,
        }


def is_total(test_cone: PolyhedralCone, K: PolyhedralCone,
             sample_budget: int = 10_000, seed: int = 0) -> TotalityVerdict:
    """Do nonnegative pairings against the test cone force membership in K?

    Exact at dim <= 8 (predual ray enumeration); sampled three-valued verdict
    above that, where NoCounterexampleFound is explicitly not a proof.
    """
    if test_cone.dim != K.dim:
        raise DimensionMismatch("test cone and K live in different dimensions")
    if test_cone.dim <= RAY_DIM_CAP:
        rays = _extreme_rays_exact(_exact_vectors(test_cone.generators), test_cone.dim)
        K_exact = _exact_vectors(K.generators)
        for ray in rays:
            if not _in_cone_exact(ray, K_exact):
                return TotalityVerdict(REFUTED, tuple(float(x) for x in ray), 0)
        return TotalityVerdict(PROVED_TOTAL, None, 0)
    return _is_total_sampled(test_cone, K, sample_budget, seed)


def _is_total_sampled(test_cone, K, sample_budget, seed):
    rng = np.random.default_rng(seed)
    G = np.array([[float(x) for x in g] for g in test_cone.generators], dtype=float)
    norms = np.einsum("ij,ij->i", G, G)
    used = 0
    for _ in range(sample_budget):
        u = rng.standard_normal(test_cone.dim)
        # cyclic projection onto the halfspaces <g, u> >= 0
        for _ in range(60):
            pair = G @ u
            worst = int(np.argmin(pair))
            if pair[worst] >= 0:
                break
            u = u - (pair[worst] / norms[worst]) * G[worst]
        used += 1
        if np.min(G @ u) < -1e-12:
            continue
        norm = np.abs(u).sum()
        if norm < 1e-9:
            continue
        u = u / norm
        if distance_to_cone(K, u) > _MEMBERSHIP_DIST_TOL:
            return TotalityVerdict(REFUTED, tuple(u), used)
    return TotalityVerdict(NO_COUNTEREXAMPLE, None, used)


@dataclass(frozen=True)
class NonannihilatingVerdict:
    ok: bool
    witness: Optional[tuple]   # (test generator, K generator) pairing to ~0

    def to_json_dict(self) -> dict:
        return {
            "nonannihilating": self.ok,
            "witness": None if self.witness is None else
            [[float(x) for x in v] for v in self.witness],
        }


def is_nonannihilating(test_cone: PolyhedralCone, K: PolyhedralCone,
                       tol: float = POSITIVITY_TOL) -> NonannihilatingVerdict:
    """Strict positivity of every test generator against every K generator.

    Positivity on generators extends to all nonzero u in K by conic
    combination, so the generator check is exact for finitely generated K.
    Requires K pointed: for a linear subspace every dual functional
    annihilates all of K, a structural failure reported as NotPointed.
    """
    if test_cone.dim != K.dim:
        raise DimensionMismatch("test cone and K live in different dimensions")
    verdict = is_pointed(K)
    if not verdict.pointed:
        raise NotPointed("K contains a line; every dual functional annihilates it")
    for xstar in test_cone.generators:
        for g in K.generators:
            if _pair(xstar, g) <= tol:
                return NonannihilatingVerdict(False, (xstar, g))
    return NonannihilatingVerdict(True, None)


# ---------------------------------------------------------------------------
# uniqueness probe


@dataclass(frozen=True)
class UniquenessReport:
    nonannihilating: NonannihilatingVerdict
    totality: TotalityVerdict
    interior_flags: tuple            # per test generator, in int K*?
    consequence_a_applicable: bool   # nonannihilating => generators interior
    consequence_a_holds: bool
    consequence_b_applicable: bool   # strictly interior test cone => not total
    consequence_b_holds: bool

    def to_json_dict(self) -> dict:
        return {
            "nonannihilating": self.nonannihilating.to_json_dict(),
            "totality": self.totality.to_json_dict(),
            "interior_flags": list(self.interior_flags),
            "consequence_a": {
                "applicable": self.consequence_a_applicable,
                "holds": self.consequence_a_holds,
            },
            "consequence_b": {
                "applicable": self.consequence_b_applicable,
                "holds": self.consequence_b_holds,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def uniqueness_probe(K: PolyhedralCone, test_cone: PolyhedralCone) -> UniquenessReport:
    """Testable consequences of the only-total-and-nonannihilating cone
    being the dual interior:

    a) a nonannihilating test cone must sit inside int K*;
    b) a finitely generated test cone strictly inside int K* cannot be total.
    """
    if K.dim > RAY_DIM_CAP:
        raise DimensionCapExceeded(f"uniqueness probe capped at dimension {RAY_DIM_CAP}")
    if not is_pointed(K).pointed:
        raise NotPointed("uniqueness probe needs a pointed K")
    nan = is_nonannihilating(test_cone, K)
    interior = tuple(
        dual_interior_membership(K, g) for g in test_cone.generators
    )
    tot = is_total(test_cone, K)
    a_applicable = nan.ok
    a_holds = (not a_applicable) or all(interior)
    b_applicable = all(interior)
    b_holds = (not b_applicable) or tot.status == REFUTED
    return UniquenessReport(nan, tot, interior, a_applicable, a_holds,
                            b_applicable, b_holds)


# ---------------------------------------------------------------------------
# dual-space decomposition spot check (arbitrary functional = annihilator +
# strictly dual-interior part; exists whenever the market is arbitrage free)


@dataclass(frozen=True)
class DecompositionResult:
    ok: bool
    ell: Optional[tuple]      # annihilates the subspace
    k_part: Optional[tuple]   # pairs >= margin with every K generator
    margin: object


def dual_decomposition(subspace_basis, y, K: PolyhedralCone,
                       mode: str = "float") -> DecompositionResult:
    """Write y = ell + k with ell orthogonal to the span of subspace_basis and
    k pairing at least some positive margin with every K generator."""
    basis = [tuple(v) for v in subspace_basis]
    y = tuple(y)
    n = K.dim
    if len(y) != n or any(len(v) != n for v in basis):
        raise DimensionMismatch("vectors must match the cone dimension")
    # Variables: ell_1..ell_n (free), delta (<= 1 keeps the LP bounded).
    rows = []
    relations = []
    rhs = []
    for v in basis:
        rows.append(list(v) + [0])
        relations.append("=")
        rhs.append(0)
    for g in K.generators:
        # <y - ell, g> >= delta  <=>  <ell, g> + delta <= <y, g>
        rows.append(list(g) + [1])
        relations.append("<=")
        rhs.append(_pair(y, g))
    problem = LpProblem.build(
        objective=[0] * n + [1],
        constraint_matrix=rows,
        relations=relations,
        rhs=rhs,
        upper_bounds=[INF] * n + [1],
    )
    sol = solve_lp(problem, mode)
    if sol.status != LpStatus.OPTIMAL:
        return DecompositionResult(False, None, None, None)
    margin = sol.objective_value
    positive = margin > 0 if mode == "exact" else margin > POSITIVITY_TOL
    if not positive:
        return DecompositionResult(False, None, None, margin)
    ell = sol.point[:n]
    k_part = tuple(a - b for a, b in zip(y, ell))
    return DecompositionResult(True, ell, k_part, margin)
