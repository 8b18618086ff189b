"""Shared fixtures and random generators for the suite."""
import random
from fractions import Fraction

import pytest

from quantdga.algebra import make_free_cdga, solve_d
from quantdga.cylinder import CylinderElement
from quantdga.morphisms import Homotopy, Morphism
from quantdga.obstruction import generator_order


def cyl_target():
    return make_free_cdga([("a", 1), ("b", 1), ("u", 2), ("v", 3), ("w", 1)],
                          {"w": "a*b", "v": "u^2"}, top_degree=6)


def random_element(rng, alg, degree, density=0.6, span=3):
    basis = alg.graded_basis(degree)
    vec = {i: Fraction(rng.randint(-span, span), rng.randint(1, 3))
           for i in range(len(basis)) if rng.random() < density}
    return alg.from_vector(vec, degree) if basis else alg.zero()


def random_cylinder(rng, alg, degree, max_power=4):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        i, j = rng.randint(0, max_power), rng.randint(0, 1)
        if degree - j >= 0:
            terms[(i, j)] = random_element(rng, alg, degree - j)
    return CylinderElement(alg, terms)


def concat_source():
    return make_free_cdga([("x", 2), ("z", 1), ("y", 3)], {"y": "x^2"})


def concat_target():
    return make_free_cdga([("a", 1), ("b", 1), ("u", 2), ("v", 2), ("w", 1)],
                          {"w": "a*b"}, top_degree=3)


def random_chain_map(rng, src, tgt):
    u, v, a, b = (tgt.gen(n) for n in "uvab")
    x = u.scale(rng.randint(-2, 2)) + v.scale(rng.randint(-1, 1))
    z = a.scale(rng.randint(-2, 2)) + b.scale(rng.randint(-2, 2))
    y = solve_d(tgt, x ** 2)
    return Morphism(src, tgt, {"x": x, "z": z, "y": y})


def random_homotopy(rng, phi):
    """Phi(v) = phi(v) + d(p(t) e) + int_0^t Phi(dv), built generator by generator."""
    src, tgt = phi.source, phi.target
    images, done = {}, []
    for n in generator_order(src):
        k = src.degrees[src.index[n]]
        e = random_element(rng, tgt, k - 1, span=2)
        p = CylinderElement(tgt, {(1, 0): tgt.scalar(rng.randint(-2, 2)),
                                  (2, 0): tgt.scalar(rng.randint(-2, 2))})
        val = CylinderElement.const(phi.images[n]) + (p * CylinderElement.const(e)).d()
        if done:
            lower = Homotopy(src.subalgebra(done), tgt, images)
            val = val + lower.apply(src.diff[src.index[n]]).integrate_0_t()
        images[n] = val
        done.append(n)
    return Homotopy(src, tgt, images)


@pytest.fixture
def rng():
    return random.Random(20240611)
