"""Obstruction cocycles, homotopy extension and concatenation."""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .algebra import Element, FreeCDGA, solve_d
from .cylinder import CylinderElement, SquareElement
from .errors import (AlgebraMismatch, DiagramMismatch, EndpointMismatch, NotClosed,
                     PrimitiveInvalid, WitnessInvalid)
from .morphisms import Homotopy, Morphism


def generator_order(A: FreeCDGA, names: Iterable[str] = None) -> List[str]:
    """Generators sorted by degree, ties in declaration order."""
    names = [g.name for g in A.generators] if names is None else list(names)
    return sorted(names, key=lambda n: (A.degrees[A.index[n]], A.index[n]))


def _dv(A: FreeCDGA, v: str) -> Element:
    return A.diff[A.index[v]]


def cone_differential(h: Morphism, pair: Tuple[Element, Element]) -> Tuple[Element, Element]:
    """d(b, c) = (db, h(b) - dc) in the mapping cone of h."""
    b, c = pair
    return b.d(), h.apply(b) - c.d()


def extension_obstruction(f: Morphism, g: Morphism, h: Morphism, H: Homotopy,
                          V: Sequence[str]) -> Dict[str, Tuple[Element, Element]]:
    """O(v) = (f(dv), g(v) + int_0^1 H(dv)) for each new generator v.

    Shapes: f : A -> B, h : B -> C, g : A<V> -> C and H a homotopy from g|A
    (t = 0) to h f (t = 1). The result is a cocycle of the cone of h.
    """
    A, B, C = f.source, f.target, h.target
    if not (h.source.contains(B) and B.contains(h.source)):
        raise DiagramMismatch("h must start where f lands")
    if not g.source.contains(A):
        raise DiagramMismatch("g must be defined on an extension of f's source")
    if not (C.contains(g.target) and C.contains(H.target)):
        raise DiagramMismatch("g, H and h must land in the same algebra")
    if not (H.source.contains(A) and A.contains(H.source)):
        raise DiagramMismatch("H must be defined on f's source")
    for n in V:
        if n not in g.source.index or n in A.index:
            raise DiagramMismatch(f"{n} is not a new generator")
    start, end = H.at(0), H.at(1)
    hf = h.compose(f)
    for n in A.index:
        if start.images[n] != g.images[n] or end.images[n] != hf.images[n]:
            raise DiagramMismatch(f"H does not run from g to h f on {n}")
    out = {}
    for v in V:
        dv = _dv(g.source, v)
        try:
            dv_a = A.embed(dv)
        except AlgebraMismatch:
            raise DiagramMismatch(f"d({v}) does not lie in the base algebra") from None
        out[v] = (f.apply(dv_a), g.images[v] + H.apply(dv_a).integrate_0_1())
    for v, pair in out.items():
        db, dc = cone_differential(h, pair)
        if db or dc:
            raise DiagramMismatch(f"obstruction for {v} is not a cocycle; check the diagram")
    return out


def extend_with_witness(f: Morphism, g: Morphism, h: Morphism, H: Homotopy,
                        witness: Mapping[str, Tuple[Element, Element]]):
    """Extend f over the new generators and H to a homotopy g ~ h f~.

    ``witness[v] = (b, c)`` must satisfy d(b, c) = O(v); then f~(v) = b and
    H~(v) = g(v) + d(c (x) t) + int_0^t H(dv).
    """
    V = list(witness)
    O = extension_obstruction(f, g, h, H, V)
    A, B, C = f.source, f.target, h.target
    # the C-slot may live in a larger algebra (adjoined symbols); use the largest
    tgt_c = C
    for v in V:
        c = witness[v][1]
        if isinstance(c, Element) and c.alg.contains(tgt_c):
            tgt_c = c.alg
    pairs = {}
    for v in V:
        b, c = B.coerce(witness[v][0]), tgt_c.coerce(witness[v][1])
        ob, oc = O[v]
        if b.d() != ob or tgt_c.embed(h.apply(b)) - c.d() != tgt_c.embed(oc):
            raise WitnessInvalid(f"d(b, c) != O({v})")
        pairs[v] = (b, c)
    f_images = dict(f.images)
    f_images.update({v: pairs[v][0] for v in V})
    src = g.source.subalgebra(list(A.index) + V)
    f_ext = Morphism(src, B, f_images)
    images = dict(H.images)
    for v in V:
        c = pairs[v][1]
        images[v] = (CylinderElement.const(tgt_c.embed(g.images[v]))
                     + CylinderElement.tensor(c, 1).d()
                     + H.apply(_dv(src, v)).integrate_0_t())
    H_ext = Homotopy(src, tgt_c, images)
    return f_ext, H_ext


def homotopy_step_obstruction(phi: Morphism, psi: Morphism, PhiK: Homotopy,
                              V: Sequence[str]) -> Dict[str, Element]:
    """sigma(v) = psi(v) - phi(v) - int_0^1 PhiK(dv); each is closed."""
    M = phi.source
    out = {}
    for v in V:
        s = psi.images[v] - phi.images[v] - PhiK.apply(_dv(M, v)).integrate_0_1()
        if s.d():
            raise NotClosed(f"sigma({v}) is not closed; PhiK is not a homotopy from phi to psi")
        out[v] = s
    return out


def extend_homotopy(PhiK: Homotopy, primitives: Mapping[str, Element], phi: Morphism,
                    psi: Morphism) -> Homotopy:
    """Phi_{k+1}(v) = phi(v) + d(c(v) (x) t) + int_0^t PhiK(dv), needs dc(v) = sigma(v)."""
    V = list(primitives)
    sigma = homotopy_step_obstruction(phi, psi, PhiK, V)
    tgt = PhiK.target
    for v in V:
        c = primitives[v]
        if isinstance(c, Element) and c.alg.contains(tgt):
            tgt = c.alg
    images = dict(PhiK.images)
    M = phi.source
    for v in V:
        c = tgt.coerce(primitives[v])
        if c.d() != sigma[v]:
            raise PrimitiveInvalid(f"d c({v}) != sigma({v})")
        images[v] = (CylinderElement.const(tgt.embed(phi.images[v]))
                     + CylinderElement.tensor(c, 1).d()
                     + PhiK.apply(_dv(M, v)).integrate_0_t())
    src = M.subalgebra(list(PhiK.source.index) + V)
    return Homotopy(src, tgt, images)


def _square_apply(src: FreeCDGA, images: Dict[str, SquareElement], x: Element,
                  cache: Dict) -> SquareElement:
    x = src.embed(x)
    alg = next(iter(images.values())).alg if images else None
    out = None
    for m, c in x.terms.items():
        val = cache.get(m)
        if val is None:
            val = SquareElement(alg, {(0, 0, 0, 0): alg.one()})
            for i, e in m:
                img = images[src.generators[i].name]
                for _ in range(e):
                    val = val * img
            cache[m] = val
        term = val.scale(c)
        out = term if out is None else out + term
    return out if out is not None else SquareElement.zero(alg)


def concatenate(Phi: Homotopy, Psi: Homotopy) -> Homotopy:
    """Join a homotopy phi ~ psi with psi ~ xi through a square and its diagonal.

    Phi sits on the edge s = 0 and Psi (in the variable s) on the edge t = 1;
    the square map is extended generator by generator with the correction
    int_0^s (Xi(dv) - Xi(dv)|_{t=1}), then restricted to s = t.
    """
    if not (Phi.source.contains(Psi.source) and Psi.source.contains(Phi.source)):
        raise AlgebraMismatch("homotopies have different sources")
    end, start = Phi.at(1), Psi.at(0)
    if any(end.images[n] != start.images[n] for n in end.images):
        raise EndpointMismatch("Phi ends where Psi does not start")
    tgt = Phi.target if Phi.target.contains(Psi.target) else Psi.target
    diag = {v: sq.diagonal() for v, sq in square_lift(Phi, Psi).items()}
    return _make_additive(Phi, Psi, tgt, diag)


def _make_additive(Phi: Homotopy, Psi: Homotopy, tgt: FreeCDGA,
                   diag: Dict[str, CylinderElement]) -> Homotopy:
    """Rebuild the diagonal so that int_0^1 is additive on generators.

    Any homotopy satisfies Xi(v) = phi(v) + d K(v) + int_0^t Xi(dv) with
    K(v) = int_0^t Xi(v).  Shifting K(v) by t (x) e leaves a homotopy as long
    as de = 0, and moves int_0^1 Xi(v) by e.  Generators are visited in degree
    order; where the sum of the two integrals has the wrong boundary (which
    can only happen when dv is a product), the nearest admissible value is
    used instead.
    """
    src = Phi.source
    phi, xi = Phi.at(0), Psi.at(1)
    images: Dict[str, CylinderElement] = {}
    changed = False
    for v in generator_order(src):
        want = tgt.embed(Phi.images[v].integrate_0_1()) + tgt.embed(Psi.images[v].integrate_0_1())
        have = diag[v].integrate_0_1()
        if not changed and want == have:
            images[v] = diag[v]
            continue
        lower = Homotopy(src, tgt, {**diag, **images}).apply(_dv(src, v))
        sigma = tgt.embed(xi.images[v]) - tgt.embed(phi.images[v]) - lower.integrate_0_1()
        if want.d() != sigma:
            fix = solve_d(tgt, sigma - want.d())
            if fix is None:
                return Homotopy(src, tgt, diag)
            want = want + fix
        K = diag[v].integrate_0_t() + CylinderElement.tensor(want - have, 1)
        images[v] = (CylinderElement.const(tgt.embed(phi.images[v])) + K.d()
                     + lower.integrate_0_t())
        changed = changed or images[v] != diag[v]
    return Homotopy(src, tgt, images)


def square_lift(Phi: Homotopy, Psi: Homotopy) -> Dict[str, SquareElement]:
    """The square-valued map behind ``concatenate`` (exposed for checking)."""
    tgt = Phi.target if Phi.target.contains(Psi.target) else Psi.target
    src = Phi.source
    images: Dict[str, SquareElement] = {}
    cache: Dict = {}
    for v in generator_order(src):
        phi_v = CylinderElement(tgt, Phi.images[v].terms)
        psi_v = CylinderElement(tgt, {k: a for k, a in Psi.images[v].terms.items() if k != (0, 0)})
        base = SquareElement.from_t(phi_v) + SquareElement.from_s(psi_v)
        dv = _dv(src, v)
        if dv:
            r = _square_apply(src, images, dv, cache)
            base = base + (r - r.restrict_t(1)).integrate_0_s()
        images[v] = base
    return images
