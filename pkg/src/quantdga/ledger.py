"""Exponent-level bookkeeping of Lipschitz constants.

Each atom (a generator of a target algebra) carries an integer or rational
exponent: an atom of weight w stands for a form of size O(L^w). Products add
exponents, sums take the maximum and constants are dropped.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .algebra import Element, FreeCDGA
from .cylinder import CylinderElement
from .errors import UnregisteredAtom
from .morphisms import Homotopy, Morphism

Number = Union[int, Fraction]


class WeightLedger:
    def __init__(self, weights: Optional[Mapping[str, Number]] = None, dt_exponent: Number = 0):
        self.weights: Dict[str, Fraction] = {k: Fraction(v) for k, v in (weights or {}).items()}
        self.dt_exponent = Fraction(dt_exponent)
        if self.dt_exponent < 0:
            raise ValueError("dt exponent must be non-negative")

    @classmethod
    def from_algebra(cls, alg: FreeCDGA, dt_exponent: Number = 0) -> "WeightLedger":
        """Ledger from the ``weight`` fields of an algebra's generators."""
        return cls({g.name: g.weight for g in alg.generators if g.weight is not None}, dt_exponent)

    def register(self, atom: str, weight: Number) -> None:
        self.weights[atom] = Fraction(weight)

    def copy(self) -> "WeightLedger":
        return WeightLedger(dict(self.weights), self.dt_exponent)

    def __contains__(self, atom: str) -> bool:
        return atom in self.weights

    def _atom(self, alg: FreeCDGA, i: int) -> Fraction:
        name = alg.generators[i].name
        try:
            return self.weights[name]
        except KeyError:
            raise UnregisteredAtom(f"atom {name} has no ledger weight") from None

    def monomial_weight(self, alg: FreeCDGA, m) -> Fraction:
        return sum((self._atom(alg, i) * e for i, e in m), Fraction(0))

    def weight(self, x: Union[Element, CylinderElement]) -> Fraction:
        """Largest weight of a term; the zero element has weight 0."""
        if isinstance(x, CylinderElement):
            best = None
            for (_, j), a in x.terms.items():
                w = self.weight(a) + (self.dt_exponent if j else 0)
                best = w if best is None or w > best else best
            return best if best is not None else Fraction(0)
        best = None
        for m in x.terms:
            w = self.monomial_weight(x.alg, m)
            best = w if best is None or w > best else best
        return best if best is not None else Fraction(0)

    def top_part(self, x: Element) -> Tuple[Fraction, Element]:
        """(weight, sum of the terms that attain it)."""
        w = self.weight(x)
        terms = {m: c for m, c in x.terms.items() if self.monomial_weight(x.alg, m) == w}
        return w, Element(x.alg, terms)

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in sorted(self.weights.items()))
        return f"WeightLedger({inner}; dt={self.dt_exponent})"


def dilatation_exponent(m: Union[Morphism, Homotopy], ledger: WeightLedger) -> Fraction:
    """max over generators v with nonzero image of weight(image v) / deg v."""
    best = Fraction(0)
    for g in m.source.generators:
        img = m.images[g.name]
        if not img:
            continue
        best = max(best, ledger.weight(img) / g.degree)
    return best


def formal_length(Phi: Homotopy, ledger: WeightLedger) -> Fraction:
    """Dilatation exponent of v -> int_0^1 Phi(v), normalised by deg v."""
    best = Fraction(0)
    for g in Phi.source.generators:
        val = Phi.images[g.name].integrate_0_1()
        if val:
            best = max(best, ledger.weight(val) / g.degree)
    return best


def generator_weights(m: Union[Morphism, Homotopy], ledger: WeightLedger) -> Dict[str, Fraction]:
    return {n: ledger.weight(img) for n, img in m.images.items() if img}


def scaling_exponent(values: Mapping[Number, Number]) -> Fraction:
    """Exponent e with value(eps) = K * eps^e, read off exactly from two or more samples.

    Raises ValueError when the samples are not a single power law.
    """
    pts = [(Fraction(e), Fraction(v)) for e, v in values.items()]
    pts = [(e, v) for e, v in pts if e > 0]
    if len(pts) < 2 or any(v == 0 for _, v in pts):
        raise ValueError("need at least two positive samples with nonzero values")
    (e0, v0), (e1, v1) = pts[0], pts[1]
    ratio = abs(v1 / v0)
    base = e1 / e0
    est = math.log(ratio) / math.log(base)
    k = Fraction(est).limit_denominator(64)
    coef = v0 / _fpow(e0, k)
    for e, v in pts:
        if v != coef * _fpow(e, k):
            raise ValueError("samples do not follow a single power law")
    return k


def _fpow(x: Fraction, k: Fraction) -> Fraction:
    if k.denominator != 1:
        raise ValueError("only integer exponents are resolved exactly")
    return x ** int(k)
