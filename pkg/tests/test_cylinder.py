import random
from fractions import Fraction

import pytest

from quantdga.cylinder import (CylinderElement, SquareElement, diagonal_restrict, dt,
                               integrate_0_1, integrate_0_t, t, t_poly)
from quantdga.errors import DegreeCapExceeded
from quantdga.models import canned_model

from conftest import cyl_target, random_cylinder


def _i0t_holds(u):
    lhs = integrate_0_t(u).d() + integrate_0_t(u.d())
    return lhs == u - CylinderElement.const(u.at(0))


def _i01_holds(u):
    return integrate_0_1(u).d() + integrate_0_1(u.d()) == u.at(1) - u.at(0)


def test_integration_identities_on_1200_random_elements():
    rng = random.Random(7)
    T = cyl_target()
    bad = []
    for n in range(1200):
        u = random_cylinder(rng, T, rng.randint(0, 5))
        if not (_i0t_holds(u) and _i01_holds(u)):
            bad.append(u)
    assert not bad, bad[:3]


def test_cylinder_differential_sign_on_odd_product():
    R = canned_model("EpsTarget")
    xy = R["x"] * R["y"]
    u = CylinderElement.tensor(xy, 1)
    assert u.d() == CylinderElement.tensor(-xy, 0, 1)


def test_trivial_examples():
    T = cyl_target()
    a = T["a"]
    u = CylinderElement.tensor(a, 0, 1)
    assert _i0t_holds(u)
    # a (x) t with a closed integrates to a
    v = CylinderElement.tensor(a, 1)
    assert integrate_0_1(v.d()) == v.at(1) - v.at(0) == a


def test_d_squared_zero_and_leibniz_on_cylinder():
    rng = random.Random(3)
    T = cyl_target()
    for _ in range(200):
        p, q = rng.randint(0, 3), rng.randint(0, 3)
        u, v = random_cylinder(rng, T, p, 3), random_cylinder(rng, T, q, 3)
        assert not u.d().d()
        assert (u * v).d() == u.d() * v + (u * v.d()).scale((-1) ** p)


def test_dt_squares_to_zero_and_anticommutes_with_odd():
    T = cyl_target()
    assert not dt(T) * dt(T)
    a = CylinderElement.const(T["a"])
    assert a * dt(T) == -(dt(T) * a)
    assert t(T) * t(T) == t_poly(T, {2: 1})


def test_reverse_swaps_endpoints_and_negates_integral():
    rng = random.Random(11)
    T = cyl_target()
    for _ in range(100):
        u = random_cylinder(rng, T, rng.randint(1, 4))
        r = u.reverse()
        assert r.at(0) == u.at(1) and r.at(1) == u.at(0)
        assert integrate_0_1(r) == -integrate_0_1(u)
        assert r.reverse() == u
        assert r.d() == u.d().reverse()


def test_square_i0t_in_s():
    rng = random.Random(5)
    T = cyl_target()
    for _ in range(150):
        u = SquareElement.from_t(random_cylinder(rng, T, 2, 2)) * SquareElement.from_s(
            random_cylinder(rng, T, rng.randint(0, 2), 2))
        lhs = u.integrate_0_s().d() + u.d().integrate_0_s()
        assert lhs == u - u.restrict_s(0)
        assert not u.d().d()


def test_diagonal_is_a_chain_map():
    rng = random.Random(9)
    T = cyl_target()
    for _ in range(150):
        u = SquareElement.from_t(random_cylinder(rng, T, 1, 2)) * SquareElement.from_s(
            random_cylinder(rng, T, 1, 2))
        assert diagonal_restrict(u.d()) == diagonal_restrict(u).d()


def test_power_cap():
    T = cyl_target()
    with pytest.raises(DegreeCapExceeded):
        CylinderElement.tensor(T["a"], 10 ** 6)


def test_degree_and_printing():
    T = cyl_target()
    u = CylinderElement.tensor(T["u"], 2) + CylinderElement.tensor(T["a"], 1, 1)
    assert u.degree() == 2
    assert "t^2" in str(u)
