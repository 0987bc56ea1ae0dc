"""Shared generators and independent oracles for the test suite.

The grid oracle deliberately avoids the LP path: it probes strategies on a
dense deterministic set of unit directions and inspects the sign pattern of
the resulting scenario gains.
"""

import itertools
import random
from fractions import Fraction

import numpy as np

from conemarket.market import Market, validate_market


def random_rational_market(rng: random.Random, n_max=8, d_max=5) -> Market:
    """Market with small integer-rational data and strictly positive probs."""
    n = rng.randint(1, n_max)
    d = rng.randint(1, d_max)
    r = Fraction(rng.randint(0, 4), 10)
    pi = [Fraction(rng.randint(0, 8), rng.choice([1, 2])) for _ in range(d)]
    S = [
        [Fraction(rng.randint(0, 10), rng.choice([1, 2])) for _ in range(d)]
        for _ in range(n)
    ]
    weights = [rng.randint(1, 5) for _ in range(n)]
    total = sum(weights)
    p = [Fraction(w, total) for w in weights]
    return validate_market(r, pi, S, p)


def grid_arbitrage_oracle(Y, n_points=10_000, tol=1e-9, seed=7):
    """Brute-force free/not-free verdict from unit-sphere strategy probing.

    Returns (found, best_gain): found is True when some probed strategy has
    all scenario gains >= -tol with at least one > tol.
    """
    Yf = np.array([[float(x) for x in row] for row in Y], dtype=float)
    d = Yf.shape[1]
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_points, d))
    norms = np.linalg.norm(dirs, axis=1)
    dirs = dirs[norms > 1e-12] / norms[norms > 1e-12, None]
    if d == 1:
        dirs = np.array([[1.0], [-1.0]])
    gains = dirs @ Yf.T  # (points, scenarios)
    no_loss = (gains >= -tol).all(axis=1)
    some_gain = (gains > tol).any(axis=1)
    hits = no_loss & some_gain
    best = float(gains[no_loss].max()) if no_loss.any() else 0.0
    return bool(hits.any()), best


def random_pointed_cone(rng: random.Random, dim, max_gens=8):
    """Random pointed cone: generators drawn from a shifted positive region
    of a random rotation, so no line can sneak in."""
    from conemarket.cones import PolyhedralCone, is_pointed

    while True:
        g = rng.randint(dim, max_gens)
        gens = []
        for _ in range(g):
            vec = [rng.randint(0, 6) for _ in range(dim)]
            if any(vec):
                gens.append(vec)
        if not gens:
            continue
        cone = PolyhedralCone.from_generators(gens, dim)
        if is_pointed(cone).pointed:
            return cone


def indicator_family(dim):
    """All nonzero 0/1 indicator vectors: the simple-functions cone at finite
    scenario count."""
    return [g for g in itertools.product([0, 1], repeat=dim) if any(g)]
