import math

import pytest

from quantdga.bounds import (crossing_point, format_sci, proof_kappa, rho, weird_recurrence)


def test_crossing_matches_rho():
    for kappa in (0.5, 1.0, 2.5, 5.0):
        L = crossing_point(kappa)
        assert math.isclose(rho(L, kappa), L, rel_tol=1e-9)


def test_kappa_five_crossing():
    L = crossing_point(5)
    assert abs(L / 7.2e10 - 1) < 0.01
    assert format_sci(L) == "7.20e10"


def test_small_kappa_crossing_tends_to_one():
    assert crossing_point(1e-4) == pytest.approx(1.0, abs=1e-7)


def test_format_sci():
    assert format_sci(12345.0) == "1.23e4"
    assert format_sci(0.000125, 2) == "1.3e-4"


def test_ratio_non_increasing_with_proof_kappa():
    k = proof_kappa(2, 2)
    assert k == pytest.approx(math.sqrt(2 * math.log(8)))
    t = weird_recurrence(2, 2, 2, k, 1e12, Lmin=1e4, per_decade=8)
    assert t.non_increasing()
    assert max(t.ratios()) <= t.A * (1 + 1e-12)
    assert t.rows[0][0] == pytest.approx(1e4) and t.rows[-1][0] == pytest.approx(1e12)


def test_ratio_grows_when_kappa_too_small():
    t = weird_recurrence(2, 2, 2, 1.0, 1e12, per_decade=2)
    assert not t.non_increasing()


def test_bound_dominates_both_branches():
    C, Cp, n = 2, 2, 2
    k = proof_kappa(C, Cp)
    t = weird_recurrence(C, Cp, n, k, 1e12, per_decade=3)
    for L, g, r in t.rows:
        assert g >= 2 * C * Cp ** (2 * n / (2 * n - 1)) * L * rho(L, k) * (1 - 1e-12)


def test_parameter_checks():
    with pytest.raises(ValueError):
        weird_recurrence(0.5, 2, 2, 1, 1e6)
    with pytest.raises(ValueError):
        weird_recurrence(2, 2, 2, 0, 1e6)
    with pytest.raises(ValueError):
        weird_recurrence(2, 2, 0, 1, 1e6)
    assert weird_recurrence(2, 2, 2, 1, 10).rows == []
