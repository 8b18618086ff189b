"""Maps out of free CDGAs: morphisms, cylinder homotopies and derivation classes."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional

from .algebra import Element, FreeCDGA, Monomial
from .cylinder import CylinderElement
from .errors import AlgebraMismatch, DegreeMismatch


def _check_degrees(source: FreeCDGA, images, shift: int = 0):
    for name, img in images.items():
        if name not in source.index:
            raise AlgebraMismatch(f"{name} is not a generator of {source.describe()}")
        if img:
            deg = source.degrees[source.index[name]] + shift
            if img.degree() != deg:
                raise DegreeMismatch(f"image of {name} has degree {img.degree()}, expected {deg}")


class Morphism:
    """Algebra map determined by generator images. Missing generators map to 0."""

    def __init__(self, source: FreeCDGA, target: FreeCDGA, images: Mapping[str, object]):
        self.source = source
        self.target = target
        self.images: Dict[str, Element] = {}
        for g in source.generators:
            raw = images.get(g.name, 0)
            self.images[g.name] = target.coerce(raw)
        extra = set(images) - set(source.index)
        if extra:
            raise AlgebraMismatch(f"unknown generators {sorted(extra)}")
        _check_degrees(source, self.images)
        self._cache: Dict[Monomial, Element] = {}

    @classmethod
    def zero(cls, source: FreeCDGA, target: FreeCDGA) -> "Morphism":
        return cls(source, target, {})

    @classmethod
    def identity(cls, A: FreeCDGA) -> "Morphism":
        return cls(A, A, {g.name: A.gen(g.name) for g in A.generators})

    def _mono(self, m: Monomial) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        out = self.target.one()
        for i, e in m:
            img = self.images[self.source.generators[i].name]
            for _ in range(e):
                out = out * img
                if not out:
                    break
        self._cache[m] = out
        return out

    def apply(self, x: Element) -> Element:
        x = self.source.embed(x)
        out = self.target.zero()
        for m, c in x.terms.items():
            out = out + self._mono(m).scale(c)
        return out

    __call__ = apply

    def is_chain_map(self) -> bool:
        return all(self.images[g.name].d() == self.apply(self.source.diff[i])
                   for i, g in enumerate(self.source.generators))

    def chain_defects(self) -> Dict[str, Element]:
        out = {}
        for i, g in enumerate(self.source.generators):
            diff = self.images[g.name].d() - self.apply(self.source.diff[i])
            if diff:
                out[g.name] = diff
        return out

    def restrict(self, sub: FreeCDGA) -> "Morphism":
        return Morphism(sub, self.target, {g.name: self.images[g.name] for g in sub.generators})

    def retarget(self, target: FreeCDGA) -> "Morphism":
        return Morphism(self.source, target, {n: target.embed(e) for n, e in self.images.items()})

    def compose(self, first: "Morphism") -> "Morphism":
        """self after first."""
        return Morphism(first.source, self.target,
                        {n: self.apply(e) for n, e in first.images.items()})

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        if set(self.images) != set(other.images):
            return False
        return all(self.images[n] == other.images[n] for n in self.images)

    __hash__ = None  # type: ignore[assignment]

    def describe(self) -> str:
        return "\n".join(f"{n} -> {self.images[n]}" for n in self.images)


class Homotopy:
    """A map into target (x) <t, dt>, determined by generator images."""

    def __init__(self, source: FreeCDGA, target: FreeCDGA, images: Mapping[str, object]):
        self.source = source
        self.target = target
        self.images: Dict[str, CylinderElement] = {}
        for g in source.generators:
            raw = images.get(g.name)
            if raw is None:
                raw = CylinderElement.zero(target)
            elif isinstance(raw, Element):
                raw = CylinderElement.const(target.embed(raw))
            elif not isinstance(raw, CylinderElement):
                raw = CylinderElement.const(target.coerce(raw))
            raw = CylinderElement(target, {k: target.embed(v) for k, v in raw.terms.items()})
            if raw and raw.degree() != g.degree:
                raise DegreeMismatch(f"image of {g.name} has degree {raw.degree()}, expected {g.degree}")
            self.images[g.name] = raw
        extra = set(images) - set(source.index)
        if extra:
            raise AlgebraMismatch(f"unknown generators {sorted(extra)}")
        self._cache: Dict[Monomial, CylinderElement] = {}
        self._ends: Dict[Fraction, Morphism] = {}

    @classmethod
    def constant(cls, f: Morphism) -> "Homotopy":
        return cls(f.source, f.target, {n: CylinderElement.const(e) for n, e in f.images.items()})

    def _mono(self, m: Monomial) -> CylinderElement:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        out = CylinderElement.const(self.target.one())
        for i, e in m:
            img = self.images[self.source.generators[i].name]
            for _ in range(e):
                out = out * img
        self._cache[m] = out
        return out

    def apply(self, x: Element) -> CylinderElement:
        x = self.source.embed(x)
        out = CylinderElement.zero(self.target)
        for m, c in x.terms.items():
            out = out + self._mono(m).scale(c)
        return out

    __call__ = apply

    def at(self, eps) -> Morphism:
        eps = Fraction(eps)
        if eps not in self._ends:
            self._ends[eps] = Morphism(self.source, self.target,
                                       {n: u.at(eps) for n, u in self.images.items()})
        return self._ends[eps]

    def is_chain_map(self) -> bool:
        return all(self.images[g.name].d() == self.apply(self.source.diff[i])
                   for i, g in enumerate(self.source.generators))

    def integrals(self) -> Dict[str, Element]:
        return {n: u.integrate_0_1() for n, u in self.images.items()}

    def restrict(self, sub: FreeCDGA) -> "Homotopy":
        return Homotopy(sub, self.target, {g.name: self.images[g.name] for g in sub.generators})

    def retarget(self, target: FreeCDGA) -> "Homotopy":
        return Homotopy(self.source, target, self.images)

    def reverse(self) -> "Homotopy":
        return Homotopy(self.source, self.target, {n: u.reverse() for n, u in self.images.items()})

    def describe(self) -> str:
        return "\n".join(f"{n} -> {self.images[n]}" for n in self.images)


def validate_homotopy(H: Homotopy, f: Morphism, g: Morphism) -> bool:
    """True iff H is a chain map with H|t=0 = f and H|t=1 = g."""
    for m in (f, g):
        if not (m.source.contains(H.source) and H.source.contains(m.source)):
            raise AlgebraMismatch("endpoint morphisms have a different source")
        if not (H.target.contains(m.target) or m.target.contains(H.target)):
            raise AlgebraMismatch("endpoint morphisms have an unrelated target")
    if not H.is_chain_map():
        return False
    for eps, m in ((0, f), (1, g)):
        end = H.at(eps)
        if any(end.images[n] != m.images[n] for n in end.images):
            return False
    return True


class DerivationClass:
    """phi + eta (x) e with e of degree 1, e^2 = 0, de = 0.

    eta is given on generators and extended by
    eta(uv) = (-1)^|v| eta(u) phi(v) + phi(u) eta(v).
    """

    def __init__(self, base: Morphism, eta: Mapping[str, object]):
        self.base = base
        self.eta: Dict[str, Element] = {g.name: base.target.coerce(eta.get(g.name, 0))
                                        for g in base.source.generators}
        _check_degrees(base.source, self.eta, shift=-1)
        self._cache: Dict[Monomial, Element] = {}

    def _mono(self, m: Monomial) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        src, phi = self.base.source, self.base
        tgt = self.base.target
        # walk factors left to right, tracking (phi(prefix), eta(prefix))
        p_val, e_val = tgt.one(), tgt.zero()
        for i, e in m:
            g = src.generators[i]
            for _ in range(e):
                pv = phi.images[g.name]
                ev = self.eta[g.name]
                sign = -1 if g.degree % 2 else 1
                e_val = e_val * pv * sign + p_val * ev
                p_val = p_val * pv
        self._cache[m] = e_val
        return e_val

    def apply(self, x: Element) -> Element:
        x = self.base.source.embed(x)
        out = self.base.target.zero()
        for m, c in x.terms.items():
            out = out + self._mono(m).scale(c)
        return out

    __call__ = apply

    def is_valid(self) -> bool:
        """d eta = eta d on generators (the derivation law holds by construction)."""
        src = self.base.source
        return all(self.eta[g.name].d() == self.apply(src.diff[i])
                   for i, g in enumerate(src.generators))

    def __add__(self, other: "DerivationClass") -> "DerivationClass":
        if other.base != self.base:
            raise AlgebraMismatch("derivation classes over different base maps")
        return DerivationClass(self.base, {n: self.eta[n] + other.eta[n] for n in self.eta})

    def __eq__(self, other):
        if not isinstance(other, DerivationClass):
            return NotImplemented
        return self.base == other.base and all(self.eta[n] == other.eta[n] for n in self.eta)

    __hash__ = None  # type: ignore[assignment]

    def obstruction(self, names) -> Dict[str, Element]:
        """v -> eta(dv) for the given generators."""
        src = self.base.source
        return {n: self.apply(src.diff[src.index[n]]) for n in names}
