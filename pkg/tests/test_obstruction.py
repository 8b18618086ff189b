import random
from fractions import Fraction

import pytest

from quantdga.algebra import Generator, make_free_cdga
from quantdga.cylinder import CylinderElement as Cyl
from quantdga.errors import (DiagramMismatch, EndpointMismatch, NotClosed, PrimitiveInvalid,
                             WitnessInvalid)
from quantdga.models import canned_model
from quantdga.morphisms import DerivationClass, Homotopy, Morphism, validate_homotopy
from quantdga.obstruction import (concatenate, cone_differential, extend_homotopy,
                                  extend_with_witness, extension_obstruction, generator_order,
                                  homotopy_step_obstruction, square_lift)

from conftest import (concat_source, concat_target, random_chain_map, random_element,
                      random_homotopy)


@pytest.fixture
def hopf():
    """S2 model, a target with w closed and dc = w, and a nullhomotopy of x."""
    S2 = canned_model("S2")
    A = S2.subalgebra(["x"])
    T = make_free_cdga([("w", 2), ("c", 1)], {"c": "w"}, top_degree=3)
    w, c = T["w"], T["c"]
    phi = Morphism(S2, T, {"x": w, "y": 0})
    H = Homotopy(A, T, {"x": Cyl.tensor(w) - Cyl.tensor(w, 1) + Cyl.tensor(c, 0, 1)})
    return S2, A, T, phi, H


def test_partial_hopf_homotopy_is_valid(hopf):
    S2, A, T, phi, H = hopf
    assert validate_homotopy(H, phi.restrict(A), Morphism.zero(A, T))


def test_generator_order():
    assert generator_order(canned_model("NF")) == ["x", "y", "z", "T"]


def test_obstruction_trivial_case():
    S2 = canned_model("S2")
    A = S2.subalgebra(["x"])
    T = make_free_cdga([("u", 2), ("v", 3)], {"v": "u^2"})
    g = Morphism(S2, T, {"x": "u", "y": "v"})
    f = g.restrict(A)
    h = Morphism.identity(T)
    O = extension_obstruction(f, g, h, Homotopy.constant(f), ["y"])
    assert O["y"] == (T["u"] ** 2, T["v"])
    f2, H2 = extend_with_witness(f, g, h, Homotopy.constant(f), {"y": (T["v"], T.zero())})
    assert f2.images["y"] == T["v"]
    assert validate_homotopy(H2, g, f2)


def test_hopf_obstruction_and_witness(hopf):
    S2, A, T, phi, H = hopf
    f, h = Morphism.zero(A, T), Morphism.identity(T)
    O = extension_obstruction(f, phi, h, H, ["y"])
    w, c = T["w"], T["c"]
    assert O["y"] == (T.zero(), -(w * c))
    assert cone_differential(h, O["y"]) == (T.zero(), T.zero())
    # no witness inside T: w c is not exact there
    with pytest.raises(WitnessInvalid):
        extend_with_witness(f, phi, h, H, {"y": (T.zero(), T.zero())})
    T2 = T.extend([Generator("eta", 2)], {"eta": "w*c"})
    f2, H2 = extend_with_witness(f, phi, h, H, {"y": (T.zero(), T2["eta"])})
    assert validate_homotopy(H2, phi, Morphism.zero(S2, T2))
    assert f2.images["y"] == T.zero()


def test_obstruction_diagram_checks(hopf):
    S2, A, T, phi, H = hopf
    f, h = Morphism.zero(A, T), Morphism.identity(T)
    with pytest.raises(DiagramMismatch):
        extension_obstruction(f, phi, h, H, ["x"])
    bad = Homotopy.constant(phi.restrict(A))
    with pytest.raises(DiagramMismatch):
        extension_obstruction(f, phi, h, bad, ["y"])


def test_step_obstruction_signs(hopf):
    S2, A, T, phi, H = hopf
    zero = Morphism.zero(S2, T)
    w, c = T["w"], T["c"]
    assert homotopy_step_obstruction(phi, zero, H, ["y"])["y"] == w * c
    rev = Homotopy(A, T, {"x": H.images["x"].reverse()})
    assert homotopy_step_obstruction(zero, phi, rev, ["y"])["y"] == -(w * c)
    assert not homotopy_step_obstruction(phi, phi, Homotopy.constant(phi.restrict(A)), ["y"])["y"]


def test_step_obstruction_requires_a_homotopy(hopf):
    S2, A = hopf[0], hopf[1]
    T = make_free_cdga([("w", 2), ("c", 1)], {"c": "w"})
    w, c = T["w"], T["c"]
    phi = Morphism(S2, T, {"x": w, "y": w * c})
    assert phi.is_chain_map()
    bogus = Homotopy(A, T, {"x": Cyl.tensor(w) + Cyl.tensor(c, 0, 1)})
    assert not bogus.is_chain_map()
    with pytest.raises(NotClosed):
        homotopy_step_obstruction(phi, Morphism.zero(S2, T), bogus, ["y"])


def test_extend_homotopy_trivial_and_hopf(hopf):
    S2, A, T, phi, H = hopf
    const = extend_homotopy(Homotopy.constant(phi.restrict(A)), {"y": T.zero()}, phi, phi)
    assert validate_homotopy(const, phi, phi)
    T2 = T.extend([Generator("eta", 2)], {"eta": "w*c"})
    full = extend_homotopy(H, {"y": T2["eta"]}, phi, Morphism.zero(S2, T))
    assert validate_homotopy(full, phi, Morphism.zero(S2, T2))
    with pytest.raises(PrimitiveInvalid):
        extend_homotopy(H, {"y": -T2["eta"]}, phi, Morphism.zero(S2, T))


def test_derivation_classes():
    S2 = canned_model("S2")
    T = make_free_cdga([("u", 2), ("a", 1), ("b", 2)], {"b": "u*a"})
    phi = Morphism(S2, T, {"x": "u", "y": 0})
    e1 = DerivationClass(phi, {"x": "a", "y": "2*b"})
    e2 = DerivationClass(phi, {"x": "2*a", "y": "4*b"})
    e3 = DerivationClass(phi, {"x": 0, "y": "u"})
    assert e1.is_valid() and e2.is_valid() and e3.is_valid()
    assert not DerivationClass(phi, {"x": "a", "y": "b"}).is_valid()
    assert (e1 + e2) + e3 == e1 + (e2 + e3)
    assert e1 + e2 == e2 + e1
    s = (e1 + e3).obstruction(["y"])["y"]
    assert s == e1.obstruction(["y"])["y"] + e3.obstruction(["y"])["y"]
    # derivation law on a product
    xy = S2["x"] * S2["y"]
    assert e1.apply(xy) == e1.apply(S2["x"]) * phi.apply(S2["y"]) * (-1) + phi.apply(S2["x"]) * e1.apply(S2["y"])


def _random_pair(rng):
    src, tgt = concat_source(), concat_target()
    phi = random_chain_map(rng, src, tgt)
    P = random_homotopy(rng, phi)
    Q = random_homotopy(rng, P.at(1))
    return phi, P, Q


def test_random_homotopies_are_valid():
    rng = random.Random(2)
    for _ in range(20):
        phi, P, Q = _random_pair(rng)
        assert validate_homotopy(P, phi, P.at(1))
        assert validate_homotopy(Q, P.at(1), Q.at(1))


def test_concatenation_endpoints_on_random_pairs():
    rng = random.Random(4)
    for _ in range(100):
        phi, P, Q = _random_pair(rng)
        X = concatenate(P, Q)
        assert validate_homotopy(X, phi, Q.at(1))


def test_concatenation_additivity_on_random_pairs():
    rng = random.Random(4)
    failures = 0
    for _ in range(100):
        phi, P, Q = _random_pair(rng)
        X = concatenate(P, Q)
        for n in X.images:
            if X.images[n].integrate_0_1() != P.images[n].integrate_0_1() + Q.images[n].integrate_0_1():
                failures += 1
                break
    assert failures == 0, f"{failures} of 100 pairs are not exactly additive"


def test_concatenation_additive_on_generators_with_linear_differential():
    rng = random.Random(8)
    for _ in range(50):
        phi, P, Q = _random_pair(rng)
        X = concatenate(P, Q)
        for n in ("x", "z"):
            assert X.images[n].integrate_0_1() == P.images[n].integrate_0_1() + Q.images[n].integrate_0_1()


def test_concatenation_with_constant_and_reverse(hopf):
    S2, A, T, phi, H = hopf
    T2 = T.extend([Generator("eta", 2)], {"eta": "w*c"})
    full = extend_homotopy(H, {"y": T2["eta"]}, phi, Morphism.zero(S2, T))
    zero = Morphism.zero(S2, T2)
    K = concatenate(full, Homotopy.constant(zero))
    assert validate_homotopy(K, phi, zero)
    assert K.integrals() == full.integrals()
    R = concatenate(full, full.reverse())
    assert validate_homotopy(R, phi, phi)
    assert all(not v for v in R.integrals().values())


def test_square_lift_edges():
    rng = random.Random(6)
    phi, P, Q = _random_pair(rng)
    lift = square_lift(P, Q)
    for n, sq in lift.items():
        assert Cyl(sq.alg, {(i, j): a for (i, k, j, l), a in sq.restrict_s(0).terms.items()}) == P.images[n]


def test_concatenation_endpoint_mismatch(hopf):
    S2, A, T, phi, H = hopf
    with pytest.raises(EndpointMismatch):
        concatenate(H, H)


def test_concatenation_corrects_the_raw_diagonal():
    rng = random.Random(4)
    corrected = 0
    for _ in range(40):
        phi, P, Q = _random_pair(rng)
        X = concatenate(P, Q)
        raw = {v: sq.diagonal() for v, sq in square_lift(P, Q).items()}
        for v in ("x", "z"):
            assert X.images[v] == raw[v]
        gap = raw["y"].integrate_0_1() - X.images["y"].integrate_0_1()
        assert not gap.d()
        corrected += bool(gap)
    assert corrected > 0
