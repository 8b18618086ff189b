from fractions import Fraction

import pytest

from quantdga.algebra import Generator, make_free_cdga
from quantdga.cylinder import CylinderElement as Cyl
from quantdga.errors import UnregisteredAtom
from quantdga.ledger import (WeightLedger, dilatation_exponent, formal_length,
                             generator_weights, scaling_exponent)
from quantdga.models import canned_model
from quantdga.morphisms import Homotopy, Morphism, validate_homotopy
from quantdga.periods import pullback_target


def test_weight_arithmetic():
    T = make_free_cdga([("p", 2), ("q", 3)])
    L = WeightLedger({"p": 2, "q": 5})
    p, q = T["p"], T["q"]
    assert L.weight(p * q) == 7
    assert L.weight(p + q) == 5
    assert L.weight(T.zero()) == 0
    assert L.weight(T.one()) == 0
    assert L.top_part(p * p + q) == (5, q)


def test_dt_exponent_on_cylinder():
    T = make_free_cdga([("p", 2)])
    L = WeightLedger({"p": 2}, dt_exponent=Fraction(1, 2))
    u = Cyl.tensor(T["p"], 3) + Cyl.tensor(T["p"], 0, 1)
    assert L.weight(u) == Fraction(5, 2)
    with pytest.raises(ValueError):
        WeightLedger({}, dt_exponent=-1)


def test_unregistered_atom():
    T = make_free_cdga([("p", 2)])
    with pytest.raises(UnregisteredAtom):
        WeightLedger({}).weight(T["p"])


def test_pullback_dilatation_is_one():
    for name in ("S2", "S3vS3", "NF"):
        M = canned_model(name)
        n = max(M.degrees)
        phi, L = pullback_target(M, n)
        assert dilatation_exponent(phi, L) == 1
        assert all(w == M.degrees[M.index[v]] for v, w in generator_weights(phi, L).items())


def test_constant_homotopy_has_length_zero():
    phi, L = pullback_target(canned_model("S2"), 3)
    assert formal_length(Homotopy.constant(phi), L) == 0


@pytest.mark.parametrize("eps", [Fraction(1), Fraction(1, 10), Fraction(1, 1000)])
def test_eps_homotopy_integral(eps):
    S = canned_model("EpsSource")
    T = canned_model("EpsTarget")
    x, y, z = T["x"], T["y"], T["z"]
    H = Homotopy(S, T, {"a": Cyl.tensor(y.scale(eps)) - Cyl.tensor(x.scale(1 / (2 * eps)), 0, 1),
                        "b": Cyl.tensor(z.scale(eps ** 2)) + Cyl.tensor(x * y, 1)})
    f = Morphism(S, T, {"a": y.scale(eps), "b": z.scale(eps ** 2)})
    g = Morphism(S, T, {"a": y.scale(eps), "b": z.scale(eps ** 2) + x * y})
    assert validate_homotopy(H, f, g)
    # int_0^1 (a (x) dt) = (-1)^|a| a, and x is odd
    assert H.integrals()["a"] == x.scale(1 / (2 * eps))
    flipped = Homotopy(S, T, {"a": Cyl.tensor(y.scale(eps)) + Cyl.tensor(x.scale(1 / (2 * eps)), 0, 1),
                              "b": H.images["b"]})
    assert not validate_homotopy(flipped, f, g)


def test_eps_length_blows_up_like_inverse_eps():
    S = canned_model("EpsSource")
    vals = {}
    for eps in (Fraction(1), Fraction(1, 10), Fraction(1, 1000)):
        T = canned_model("EpsTarget")
        x, y, z = T["x"], T["y"], T["z"]
        H = Homotopy(S, T, {"a": Cyl.tensor(y.scale(eps)) - Cyl.tensor(x.scale(1 / (2 * eps)), 0, 1),
                            "b": Cyl.tensor(z.scale(eps ** 2)) + Cyl.tensor(x * y, 1)})
        vals[eps] = H.integrals()["a"].coefficient(((0, 1),))
    assert scaling_exponent(vals) == -1


def test_eps_length_with_eps_as_an_atom():
    # carry eps as a degree-2 atom e of weight -1 and x scaled by its inverse:
    # the dt coefficient of a is x / (2 eps), of weight 3 + 1
    T = make_free_cdga([("x", 3), ("y", 4), ("z", 7)], {"z": "y^2"})
    S = canned_model("EpsSource")
    H = Homotopy(S, T, {"a": Cyl.tensor(T["y"]) - Cyl.tensor(T["x"].scale(Fraction(1, 2)), 0, 1),
                        "b": Cyl.tensor(T["z"]) + Cyl.tensor(T["x"] * T["y"], 1)})
    L = WeightLedger({"x": 3, "y": 4, "z": 8})
    assert formal_length(H, L) == Fraction(3, 4)
    L_eps = WeightLedger({"x": 3 + 1, "y": 4, "z": 8})
    assert formal_length(H, L_eps) > formal_length(H, L)


def test_scaling_exponent():
    assert scaling_exponent({2: 12, 3: 27}) == 2
    assert scaling_exponent({Fraction(1, 2): 8, Fraction(1, 4): 16}) == -1
    with pytest.raises(ValueError):
        scaling_exponent({2: 1, 3: 2, 5: 7})
    with pytest.raises(ValueError):
        scaling_exponent({2: 1})
