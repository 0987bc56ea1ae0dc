import random
from fractions import Fraction

import numpy as np
import pytest

from conemarket.cones import (
    NO_COUNTEREXAMPLE,
    PROVED_TOTAL,
    REFUTED,
    PolyhedralCone,
    cone_contains,
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
from conemarket.errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    InvalidParameter,
    NotPointed,
)
from conemarket.ftap import martingale_measure
from conemarket.market import discounted_gains
from _helpers import indicator_family, random_pointed_cone, random_rational_market

ORTH2 = PolyhedralCone.orthant(2)
ORTH3 = PolyhedralCone.orthant(3)


def _same_direction(u, v, tol=1e-9):
    u = np.asarray([float(x) for x in u])
    v = np.asarray([float(x) for x in v])
    return np.allclose(u / np.abs(u).sum(), v / np.abs(v).sum(), atol=tol)


def test_construction_normalizes_and_dedupes():
    c = PolyhedralCone.from_generators([(2, 2), (1, 1), (3, 0)])
    assert len(c.generators) == 2
    assert all(abs(sum(abs(x) for x in g) - 1) < 1e-12 for g in c.generators)
    with pytest.raises(InvalidParameter):
        PolyhedralCone.from_generators([(0, 0)])


def test_dual_membership():
    assert dual_membership(ORTH2, (1, 1))
    assert not dual_membership(ORTH2, (1, -1))
    K = PolyhedralCone.from_generators([(1, 0), (1, 1)])
    assert dual_membership(K, (0, 1))
    assert not dual_membership(K, (-0.5, 1))
    with pytest.raises(DimensionMismatch):
        dual_membership(ORTH2, (1, 2, 3))


def test_dual_interior_membership():
    assert dual_interior_membership(ORTH2, (1, 1))
    assert not dual_interior_membership(ORTH2, (1, 0))
    K = PolyhedralCone.from_generators([(2, 1), (1, 2)])
    assert dual_interior_membership(K, (1, 1))
    line = PolyhedralCone.from_generators([(1, 0), (-1, 0)])
    with pytest.raises(NotPointed):
        dual_interior_membership(line, (1, 1))


def test_is_pointed():
    assert is_pointed(ORTH2).pointed
    line = PolyhedralCone.from_generators([(1, 0), (-1, 0)])
    v = is_pointed(line)
    assert not v.pointed and _same_direction(v.witness, (1, 0))
    c = PolyhedralCone.from_generators([(1, 0), (1, 1), (-1, -1)])
    v = is_pointed(c)
    assert not v.pointed and _same_direction(v.witness, (1, 1))


def test_extreme_rays_orthant():
    rays = extreme_rays([(1, 0), (0, 1)])
    assert len(rays) == 2
    assert any(_same_direction(r, (1, 0)) for r in rays)
    assert any(_same_direction(r, (0, 1)) for r in rays)


def test_extreme_rays_halfplane_covers_lineality():
    rays = extreme_rays([(1, 1)], exact=True)
    # the cone of the rays must be the full halfplane: both boundary
    # directions present and the cone regenerates e1 and e2
    assert any(_same_direction(r, (1, -1)) for r in rays)
    assert any(_same_direction(r, (-1, 1)) for r in rays)
    for probe in ((1, 0), (0, 1), (1, 1)):
        assert cone_contains(PolyhedralCone.from_generators(rays), probe)


def test_extreme_rays_wedge():
    rays = extreme_rays([(1, 0), (1, 1)])
    assert len(rays) == 2
    assert any(_same_direction(r, (0, 1)) for r in rays)
    assert any(_same_direction(r, (1, -1)) for r in rays)


def test_extreme_rays_dimension_cap():
    with pytest.raises(DimensionCapExceeded):
        extreme_rays([tuple([1] + [0] * 8)])


def test_is_total_orthant_self():
    assert is_total(ORTH3, ORTH3).status == PROVED_TOTAL


def test_is_total_refuted_for_interior_subcone():
    t = PolyhedralCone.from_generators([(1, 2), (2, 1)])
    v = is_total(t, ORTH2)
    assert v.status == REFUTED
    u = v.witness
    # witness pairs nonnegatively with the test cone but lies outside K
    assert all(sum(a * b for a, b in zip(u, g)) >= -1e-9 for g in t.generators)
    assert distance_to_cone(ORTH2, u) > 1e-6


def test_indicator_family_total():
    t = PolyhedralCone.from_generators(indicator_family(3))
    assert is_total(t, ORTH3).status == PROVED_TOTAL


def test_is_nonannihilating():
    assert is_nonannihilating(PolyhedralCone.from_generators([(1, 1)]), ORTH2).ok
    v = is_nonannihilating(PolyhedralCone.from_generators([(1, 0)]), ORTH2)
    assert not v.ok
    xstar, g = v.witness
    assert _same_direction(xstar, (1, 0)) and _same_direction(g, (0, 1))
    assert is_nonannihilating(PolyhedralCone.from_generators([(1, 2), (2, 1)]), ORTH2).ok


def test_nonannihilating_not_pointed_structural_failure():
    # a linear subspace annihilates every dual functional
    line = PolyhedralCone.from_generators([(1, 1), (-1, -1)])
    with pytest.raises(NotPointed):
        is_nonannihilating(ORTH2, line)


def test_nonannihilating_extends_to_conic_combinations():
    rng = random.Random(13)
    t = PolyhedralCone.from_generators([(1, 2, 1), (2, 1, 1), (1, 1, 3)])
    verdict = is_nonannihilating(t, ORTH3)
    assert verdict.ok
    for _ in range(1000):
        lam = [rng.random() for _ in range(3)]
        if sum(lam) < 1e-9:
            continue
        u = [sum(l * g[i] for l, g in zip(lam, ORTH3.generators)) for i in range(3)]
        for xstar in t.generators:
            assert sum(a * b for a, b in zip(xstar, u)) > 0


def test_uniqueness_probe_interior_cone():
    rep = uniqueness_probe(ORTH2, PolyhedralCone.from_generators([(1, 2), (2, 1)]))
    assert rep.nonannihilating.ok
    assert rep.consequence_a_applicable and rep.consequence_a_holds
    assert rep.consequence_b_applicable and rep.consequence_b_holds
    assert rep.totality.status == REFUTED


def test_uniqueness_probe_boundary_cases():
    # K* itself: total but annihilating, consistent with uniqueness
    rep = uniqueness_probe(ORTH2, ORTH2)
    assert not rep.nonannihilating.ok
    assert rep.totality.status == PROVED_TOTAL
    assert rep.consequence_a_holds and rep.consequence_b_holds  # vacuous
    # indicator family: total but the singleton indicator annihilates e2
    rep = uniqueness_probe(ORTH3, PolyhedralCone.from_generators(indicator_family(3)))
    assert not rep.nonannihilating.ok
    assert rep.totality.status == PROVED_TOTAL


def test_bipolar_round_trip_random_cones():
    rng = random.Random(4)
    for _ in range(40):
        dim = rng.randint(2, 5)
        K = random_pointed_cone(rng, dim)
        dual_rays = extreme_rays(list(K.generators), exact=True)
        dd = extreme_rays(dual_rays, exact=True)
        regenerated = PolyhedralCone.from_generators(dd, dim)
        for g in K.generators:
            assert cone_contains(regenerated, g)
        for g in regenerated.generators:
            assert cone_contains(K, g)


def test_interior_samples_pass_singleton_checks():
    rng = random.Random(9)
    for _ in range(50):
        y = tuple(rng.uniform(0.1, 2) for _ in range(3))
        assert dual_interior_membership(ORTH3, y)
        assert is_nonannihilating(PolyhedralCone.from_generators([y]), ORTH3).ok


def test_sampled_totality_never_refutes_on_dual_itself():
    orth9 = PolyhedralCone.orthant(9)
    v = is_total(orth9, orth9, sample_budget=2000)
    assert v.status == NO_COUNTEREXAMPLE
    assert v.samples_used == 2000


def test_sampled_totality_deterministic():
    orth9 = PolyhedralCone.orthant(9)
    a = is_total(orth9, orth9, sample_budget=500)
    b = is_total(orth9, orth9, sample_budget=500)
    assert a == b


def test_dual_decomposition_on_arbitrage_free_markets():
    rng = random.Random(21)
    tried = 0
    for _ in range(60):
        mkt = random_rational_market(rng, n_max=5, d_max=3)
        measure = martingale_measure(mkt, "exact")
        if measure is None:
            continue
        tried += 1
        gains = discounted_gains(mkt)
        n = mkt.n_scenarios
        basis = [tuple(gains.Y[w][i] for w in range(n)) for i in range(mkt.n_assets)]
        K = PolyhedralCone.orthant(n)
        y = tuple(rng.uniform(-2, 2) for _ in range(n))
        res = dual_decomposition(basis, y, K, "exact")
        assert res.ok
        # ell annihilates the subspace, k has positive margin on K generators
        for v in basis:
            assert sum(a * b for a, b in zip(res.ell, v)) == 0
        for g in K.generators:
            assert sum(Fraction(a) * b for a, b in zip(res.k_part, g)) >= res.margin > 0
    assert tried > 5
