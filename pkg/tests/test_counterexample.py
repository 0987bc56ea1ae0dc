from fractions import Fraction

import pytest

from conemarket.counterexample import (
    annihilating_functional,
    build_truncated,
    decay_report,
    no_arbitrage_at_truncation,
    separation_margin,
)
from conemarket.errors import InvalidParameter


def test_build_truncated_small():
    ex = build_truncated(1)
    assert ex.dim == 2
    assert ex.subspace_generators == ((Fraction(-1, 2), Fraction(1)),)
    ex = build_truncated(2)
    assert ex.subspace_generators[0] == (Fraction(-1, 2), 1, 0, 0)
    assert ex.subspace_generators[1] == (0, 0, Fraction(-1, 4), 1)
    ex = build_truncated(3)
    assert ex.subspace_generators[2][4] == Fraction(-1, 6)
    with pytest.raises(InvalidParameter):
        build_truncated(0)


def test_no_arbitrage_small_and_medium():
    assert no_arbitrage_at_truncation(1)
    assert no_arbitrage_at_truncation(5)
    assert no_arbitrage_at_truncation(50)


def test_separation_margin_exact_values():
    assert separation_margin(1) == Fraction(1, 2)
    assert separation_margin(2) == Fraction(1, 4)
    assert separation_margin(50) == Fraction(1, 100)


def test_margin_float_mode_close():
    assert abs(separation_margin(50, "float") - 0.01) <= 1e-9


def test_annihilation_identity():
    for N in (1, 3, 10):
        margin, nu = annihilating_functional(N)
        assert len(nu) == 2 * N
        for n in range(1, N + 1):
            assert nu[2 * n - 1] - nu[2 * n - 2] * Fraction(1, 2 * n) == 0
        assert min(nu) == margin
        assert max(nu) <= 1


def test_margin_strictly_decreasing():
    margins = [separation_margin(N) for N in range(1, 12)]
    assert all(a > b for a, b in zip(margins, margins[1:]))


def test_decay_report():
    rep = decay_report(3)
    assert [r.margin for r in rep.rows] == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 6)]
    assert all(r.arbitrage_free for r in rep.rows)
    assert all(r.margin == r.analytic for r in rep.rows)
    with pytest.raises(InvalidParameter):
        decay_report(0)


def test_decay_report_serialization():
    rep = decay_report(2)
    csv = rep.to_csv()
    assert csv.splitlines()[0] == "N,margin,analytic,arbitrage_free"
    assert "1/2" in csv
    data = rep.to_json_dict()
    assert data["rows"][1]["margin"] == "1/4"
