import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog as scipy_linprog

from quantdga.cochains import (Chain, Cochain, SimplicialPair, boundary, coboundary, cone,
                               cycle_graph, duality_check, fan_disk, guth_round, integer_solution,
                               iso_constant, min_linf_primitive, min_mass_filling,
                               nearest_integer, path_graph, prism_complex, random_pair,
                               sphere_prism)
from quantdga.errors import NotABoundary, NotACoboundary, TooLarge


def _float_linf(m, b):
    """Independent float oracle: min ||x||_inf with m x = b."""
    m = np.array(m, dtype=float)
    n = m.shape[1]
    c = np.zeros(n + 1)
    c[-1] = 1
    A_ub = np.vstack([np.hstack([np.eye(n), -np.ones((n, 1))]),
                      np.hstack([-np.eye(n), -np.ones((n, 1))])])
    res = scipy_linprog(c, A_ub=A_ub, b_ub=np.zeros(2 * n),
                        A_eq=np.hstack([m, np.zeros((m.shape[0], 1))]), b_eq=np.array(b, float),
                        bounds=[(None, None)] * (n + 1))
    return res.fun


def _float_l1(m, b):
    m = np.array(m, dtype=float)
    n = m.shape[1]
    res = scipy_linprog(np.ones(2 * n), A_eq=np.hstack([m, -m]), b_eq=np.array(b, float),
                        bounds=[(0, None)] * (2 * n))
    return res.fun


def test_faces_closed_and_complexes_square_to_zero():
    for P in (fan_disk(5), sphere_prism(), cone([(0, 1), (1, 2), (2, 0)]), cycle_graph(6)):
        for k in range(1, P.dim):
            bd1, bd2 = np.array(P.boundary_matrix(k), float), np.array(P.boundary_matrix(k + 1), float)
            if bd1.size and bd2.size:
                assert not (bd1 @ bd2).any()


def test_coboundary_is_transpose():
    P = fan_disk(4, boundary_relative=True)
    B = P.boundary_matrix(2)
    D = P.coboundary_matrix(2)
    assert D == [list(r) for r in zip(*B)]


def test_text_round_trip():
    P = fan_disk(4, boundary_relative=True)
    Q = SimplicialPair.from_text(P.to_text())
    assert Q.simplices == P.simplices and Q.A == P.A
    with pytest.raises(ValueError):
        SimplicialPair.from_text("0 1\nfoo\n")
    with pytest.raises(ValueError):
        SimplicialPair([(0, 1)], [(1, 2)])


def test_path_graph_primitive():
    P = path_graph(3)
    w = Cochain(1, {(0, 1): Fraction(1), (1, 2): Fraction(1)})
    a, norm = min_linf_primitive(P, 1, w)
    assert norm == 1
    assert a.values == {(0,): -1, (2,): 1}
    assert min_linf_primitive(P, 1, Cochain(1)) == (Cochain(0), 0)


def test_primitive_of_non_coboundary():
    P = cycle_graph(4)
    with pytest.raises(NotACoboundary):
        min_linf_primitive(P, 1, Cochain(1, {(0, 1): Fraction(1)}))


def test_disk_indicator_primitive():
    P = fan_disk(6)
    ind = Cochain(1, {s: Fraction(1) for s in P.cells(1) if 0 in s})
    w = coboundary(P, ind)
    a, norm = min_linf_primitive(P, 2, w)
    assert coboundary(P, a).values == w.values
    assert norm <= ind.norm()
    assert abs(float(norm) - _float_linf(P.coboundary_matrix(2), w.vector(P))) < 1e-9


def test_fillings():
    P = fan_disk(4)
    tri = Chain(2, {(0, 1, 2): Fraction(1)})
    S, mass = min_mass_filling(P, 2, boundary(P, tri))
    assert (S, mass) == (tri, 1)
    two = Chain(2, {(0, 1, 2): Fraction(1), (0, 2, 3): Fraction(1)})
    S, mass = min_mass_filling(P, 2, boundary(P, two))
    assert mass == 2 and boundary(P, S) == boundary(P, two)
    assert min_mass_filling(P, 2, Chain(1)) == (Chain(2), 0)
    with pytest.raises(NotABoundary):
        min_mass_filling(P, 2, Chain(1, {(0, 1): Fraction(1)}))


def test_lp_values_agree_with_float_oracle():
    rng = random.Random(17)
    for _ in range(40):
        P = random_pair(rng)
        a = Cochain(0, {s: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for s in P.cells(0)})
        w = coboundary(P, a)
        if w.values:
            _, norm = min_linf_primitive(P, 1, w)
            assert abs(float(norm) - _float_linf(P.coboundary_matrix(1), w.vector(P))) < 1e-7
        S = Chain(1, {s: Fraction(rng.randint(-3, 3)) for s in P.cells(1)})
        T = boundary(P, S)
        if T.values:
            _, mass = min_mass_filling(P, 1, T)
            assert abs(float(mass) - _float_l1(P.boundary_matrix(1), T.vector(P))) < 1e-7


@pytest.mark.parametrize("pair,k,expected", [
    (cycle_graph(6), 1, Fraction(3, 2)),
    (path_graph(3), 1, Fraction(1)),
    (SimplicialPair([(0, 1, 2)]), 1, Fraction(1, 2)),
    (SimplicialPair([(0, 1, 2)]), 2, Fraction(1, 3)),
    (fan_disk(4, boundary_relative=True), 1, None),
    (fan_disk(4, boundary_relative=True), 2, None),
])
def test_duality_on_named_complexes(pair, k, expected):
    c1, c2, eq = duality_check(pair, k)
    assert eq
    if expected is not None:
        assert c1 == expected


def test_forms_constant_dominates_samples():
    P = cycle_graph(6)
    r = iso_constant(P, 1, "forms")
    assert r.verify(P)
    rng = random.Random(1)
    for _ in range(200):
        a = Cochain(0, {s: Fraction(rng.randint(-9, 9)) for s in P.cells(0)})
        w = coboundary(P, a)
        if w.values:
            _, norm = min_linf_primitive(P, 1, w)
            assert norm <= r.constant * w.norm()


def test_trivial_pair_and_cap():
    P = SimplicialPair([(0, 1, 2)], [(0, 1, 2)])
    assert iso_constant(P, 1).constant == 0
    assert iso_constant(P, 1, "chains").constant == 0
    with pytest.raises(TooLarge):
        iso_constant(cycle_graph(13), 1)
    with pytest.raises(ValueError):
        iso_constant(P, 1, "both")


def test_cone_witnesses():
    P = cone([(0, 1), (1, 2)])
    for side in ("forms", "chains"):
        for k in (1, 2):
            r = iso_constant(P, k, side)
            assert r.verify(P)


def test_duality_on_random_pairs():
    rng = random.Random(2024)
    for k in (1, 2):
        done = 0
        while done < 12:
            P = random_pair(rng, k=k)
            if k == 2 and not P.cells(2):
                continue
            t0 = time.perf_counter()
            c1, c2, eq = duality_check(P, k)
            assert eq, (P.to_text(), c1, c2)
            assert time.perf_counter() - t0 < 30
            done += 1


def test_nearest_integer_and_integer_solution():
    assert [nearest_integer(Fraction(x, 2)) for x in (-3, -1, 1, 3)] == [-1, 0, 1, 2]
    m = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(3)]]
    assert integer_solution(m, [Fraction(4), Fraction(9)]) == [2, 3]
    assert integer_solution(m, [Fraction(1), Fraction(0)]) is None


def _random_guth(rng, P, n, integral):
    b0 = Cochain(n - 1, {s: (Fraction(rng.randint(-6, 6)) if integral
                             else Fraction(rng.randint(-40, 40), rng.randint(1, 7)))
                         for s in P.cells(n - 1)})
    e0 = Cochain(n - 1, {s: Fraction(rng.randint(-2, 2)) for s in P.cells(n - 1)})
    c = coboundary(P, e0)
    db = coboundary(P, b0)
    w = Cochain(n, {s: c.values.get(s, 0) + db.values.get(s, 0) for s in P.cells(n)})
    return c, w


@pytest.mark.parametrize("n", [1, 2, 3])
def test_guth_rounding_on_prisms(n):
    rng = random.Random(100 + n)
    P = sphere_prism() if n > 1 else prism_complex([(0, 1), (1, 2), (0, 2)])
    for trial in range(120):
        integral = trial % 4 == 0
        c, w = _random_guth(rng, P, n, integral)
        g = guth_round(P, n, c, w)
        assert g.within_bounds()
        assert all(abs(v) <= Fraction(n + 1, 2) for v in g.remainder.values.values())
        if integral:
            assert not g.remainder.values
        lhs = coboundary(P, g.rounded)
        for s in P.cells(n):
            assert lhs.values.get(s, 0) + g.remainder.values.get(s, 0) == w.values.get(s, 0) - c.values.get(s, 0)


def test_guth_trivial_and_errors():
    P = sphere_prism()
    c = Cochain(2, {})
    g = guth_round(P, 2, c, c)
    assert not g.b.values and not g.remainder.values
    with pytest.raises(ValueError):
        guth_round(P, 2, Cochain(2, {P.cells(2)[0]: Fraction(1, 2)}), c)
    with pytest.raises(NotACoboundary):
        guth_round(P, 2, c, Cochain(2, {P.cells(2)[0]: Fraction(1)}))
