"""Homotopy periods: stepwise nullhomotopies with formally adjoined primitives."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import Element, FreeCDGA, Generator, solve_d
from .cylinder import CylinderElement
from .errors import (DegreeMismatch, InvalidGrading, NotClosed, NotSimplyConnected,
                     UnresolvablePrimitive)
from .ledger import WeightLedger
from .linalg import solve
from .models import WeightGrading, space_dimension, weight_filtration
from .morphisms import Homotopy, Morphism
from .obstruction import extend_homotopy, generator_order, homotopy_step_obstruction


class AntiderivativeExtension:
    """A target algebra grown by adjoining primitives c with prescribed dc.

    ``algebra`` always holds the current extension; earlier elements embed
    into it. Each new symbol gets the ledger weight of its differential
    unless one is given.
    """

    def __init__(self, base: FreeCDGA, ledger: Optional[WeightLedger] = None):
        self.base = base
        self.algebra = base
        self.ledger = ledger.copy() if ledger is not None else WeightLedger.from_algebra(base)
        self.symbols: List[Tuple[str, Element]] = []

    def adjoin(self, name: str, dc: Element, weight=None) -> Element:
        dc = self.algebra.embed(dc) if isinstance(dc, Element) else self.algebra.coerce(dc)
        if not dc:
            raise UnresolvablePrimitive(f"refusing to adjoin {name} with dc = 0")
        if not dc.is_homogeneous():
            raise UnresolvablePrimitive(f"d{name} is not homogeneous")
        if dc.d():
            raise UnresolvablePrimitive(f"d{name} = {dc} is not closed")
        deg = dc.degree() - 1
        if deg < 1:
            raise UnresolvablePrimitive(f"{name} would have degree {deg}")
        if name in self.algebra.index:
            raise UnresolvablePrimitive(f"symbol {name} already exists")
        w = self.ledger.weight(dc) if weight is None else Fraction(weight)
        w_gen = int(w) if w.denominator == 1 else None
        self.algebra = self.algebra.extend([Generator(name, deg, w_gen)], {name: dc})
        self.ledger.register(name, w)
        self.symbols.append((name, self.algebra.gen(name)))
        return self.algebra.gen(name)

    def primitive(self, name: str, dc: Element) -> Element:
        """Adjoin c with the given dc, or return 0 when dc vanishes."""
        dc = self.algebra.embed(dc) if isinstance(dc, Element) else self.algebra.coerce(dc)
        if not dc:
            return self.algebra.zero()
        return self.adjoin(name, dc)


def _rename(x: Element, alg: FreeCDGA, names: Mapping[str, Optional[str]]) -> Element:
    out = alg.zero()
    for m, c in x.terms.items():
        term = alg.scalar(c)
        for i, e in m:
            new = names[x.alg.generators[i].name]
            if new is None:
                term = alg.zero()
                break
            term = term * alg.gen(new) ** e
        out = out + term
    return out


def symbol_name(v: str) -> str:
    return f"w^{v}"


def pullback_target(M: FreeCDGA, n: int, zero_above: Optional[int] = None,
                    weights: Optional[Mapping[str, int]] = None) -> Tuple[Morphism, WeightLedger]:
    """A generic pullback phi: M -> T for a map from an n-dimensional sphere.

    T is free on symbols ``w^v`` (one per generator of degree at most
    ``zero_above``) with d w^v = phi(dv), truncated at n; products of
    symbols above ``zero_above`` vanish. ``zero_above`` defaults to the
    dimension recorded on the model. Symbol weights default to deg v.
    """
    if zero_above is None:
        zero_above = space_dimension(M)
    if not M.minimal:
        raise NotSimplyConnected("pullback targets are built from minimal models")
    keep = [g for g in M.generators if g.degree <= n and (zero_above is None or g.degree <= zero_above)]
    names = {g.name: (symbol_name(g.name) if g in keep else None) for g in M.generators}
    wts = dict(weights or {})
    gens = [Generator(symbol_name(g.name), g.degree, wts.get(g.name, g.degree)) for g in keep]
    cap = None if zero_above is None else ([symbol_name(g.name) for g in keep], zero_above)

    def diffs(alg):
        return {symbol_name(g.name): _rename(M.diff[M.index[g.name]], alg, names) for g in keep}

    T = FreeCDGA(gens, diffs, top_degree=n, atom_cap=cap, name="pullback")
    phi = Morphism(M, T, {g.name: T.gen(symbol_name(g.name)) for g in keep})
    bad = phi.chain_defects()
    if bad:
        v = sorted(bad)[0]
        raise NotClosed(f"phi(d{v}) = {bad[v]} must vanish since {v} maps to 0")
    return phi, WeightLedger.from_algebra(T)


@dataclass
class PeriodsResult:
    phi: Morphism
    homotopy: Homotopy
    extension: AntiderivativeExtension
    integrands: Dict[str, Element] = field(default_factory=dict)
    weights: Dict[str, Fraction] = field(default_factory=dict)
    primitives: Dict[str, Element] = field(default_factory=dict)

    @property
    def weight(self) -> Fraction:
        return max(self.weights.values(), default=Fraction(0))

    @property
    def ledger(self) -> WeightLedger:
        return self.extension.ledger


def _primitive_name(phi: Morphism, v: str, taken) -> str:
    img = phi.images[v]
    if len(img.terms) == 1:
        (m, c), = img.terms.items()
        if c == 1 and len(m) == 1 and m[0][1] == 1:
            name = f"c({img.alg.generators[m[0][0]].name})"
            if name not in taken:
                return name
    name = f"c({v})"
    k = 1
    while name in taken:
        k += 1
        name = f"c{k}({v})"
    return name


def sullivan_nullhomotopy(phi: Morphism, n: int, ledger: Optional[WeightLedger] = None,
                          close_top: bool = False) -> PeriodsResult:
    """Nullhomotope phi degree by degree below n and record the degree-n integrands.

    At each generator v the obstruction sigma(v) = -(phi(v) + int_0^1 Phi(dv))
    is killed by a new symbol c with dc = phi(v) + int_0^1 Phi(dv); the
    extension then reads Phi(v) = phi(v) - d(c (x) t) + int_0^t Phi(dv).
    With ``close_top`` the generators of degree n are treated the same way,
    giving a homotopy from phi to 0 through degree n.
    """
    M = phi.source
    if not M.minimal:
        raise NotSimplyConnected("the periods pipeline needs a minimal source")
    ext = AntiderivativeExtension(phi.target, ledger)
    zero = Morphism.zero(M, phi.target)
    done: List[str] = []
    H = Homotopy(M.subalgebra([]), phi.target, {})
    result = PeriodsResult(phi, H, ext)
    for k in sorted({g.degree for g in M.generators if g.degree <= n}):
        Vk = [v for v in generator_order(M) if M.degrees[M.index[v]] == k]
        sigma = homotopy_step_obstruction(phi, zero, H, Vk)
        if k == n:
            for v in Vk:
                alpha = ext.algebra.embed(-sigma[v]) if sigma[v] else ext.algebra.zero()
                result.integrands[v] = alpha
                result.weights[v] = ext.ledger.weight(alpha)
            if not close_top:
                break
        prims = {}
        for v in Vk:
            c = ext.primitive(_primitive_name(phi, v, ext.algebra.index), -sigma[v])
            result.primitives[v] = c
            prims[v] = -c
        H = extend_homotopy(H, prims, phi, zero)
        done.extend(Vk)
    result.homotopy = H
    return result


def homotopy_periods(phi: Morphism, n: int, ledger: Optional[WeightLedger] = None) -> PeriodsResult:
    """Degree-n obstruction integrands of the stepwise nullhomotopy of phi."""
    return sullivan_nullhomotopy(phi, n, ledger)


def model_periods(M: FreeCDGA, n: int, zero_above: Optional[int] = None) -> PeriodsResult:
    phi, ledger = pullback_target(M, n, zero_above)
    return homotopy_periods(phi, n, ledger)


def cohomologous_check(a: Element, b: Element) -> bool:
    """True iff a - b is exact in the larger of the two algebras."""
    for x in (a, b):
        if x.d():
            raise NotClosed(f"{x} is not closed")
    if a and b and a.degree() != b.degree():
        raise DegreeMismatch("elements of different degrees")
    diff = a - b
    if not diff:
        return True
    return solve_d(diff.alg, diff) is not None


def reduce_weight(x: Element, ledger: WeightLedger, max_rounds: int = 16) -> Tuple[Element, Fraction, Element]:
    """Greedy top-weight cancellation by exact corrections.

    Returns (reduced element, its weight, the primitive y with x - reduced = dy).
    Each round looks for y, built from degree-(deg x - 1) monomials whose
    differential stays within the current weight, such that x - dy has no
    term of the current top weight.
    """
    if x.d():
        raise NotClosed(f"{x} is not closed")
    alg = x.alg
    if not x:
        return x, Fraction(0), alg.zero()
    deg = x.degree()
    total = alg.zero()
    for _ in range(max_rounds):
        W = ledger.weight(x)
        pool = []
        for m in alg.graded_basis(deg - 1):
            dm = Element(alg, alg.d_mono(m))
            if dm and ledger.weight(dm) <= W:
                pool.append((m, dm))
        top = sorted({mu for mu in x.terms if ledger.monomial_weight(alg, mu) == W}
                     | {mu for _, dm in pool for mu in dm.terms
                        if ledger.monomial_weight(alg, mu) == W})
        if not pool or not top:
            break
        y = _sparsest_correction(x, pool, top)
        if y is None:
            break
        x = x - y.d()
        total = total + y
        if not x:
            break
    return x, ledger.weight(x), total


def _sparsest_correction(x: Element, pool, top, max_support: int = 3) -> Optional[Element]:
    """y in the span of the pool cancelling x on the ``top`` monomials, fewest terms first."""
    alg = x.alg
    rhs = [x.coefficient(mu) for mu in top]
    # short monomials first so that ties go to the simplest correction
    pool = sorted(pool, key=lambda p: (sum(e for _, e in p[0]), p[0]))
    sizes = range(1, min(max_support, len(pool)) + 1)
    for size in sizes:
        for combo in itertools.combinations(range(len(pool)), size):
            rows = [[pool[j][1].coefficient(mu) for j in combo] for mu in top]
            sol = solve(rows, rhs)
            if sol is not None and all(sol):
                return Element(alg, {pool[j][0]: c for j, c in zip(combo, sol)})
    rows = [[dm.coefficient(mu) for _, dm in pool] for mu in top]
    sol = solve(rows, rhs)
    if sol is None:
        return None
    return Element(alg, {m: c for (m, _), c in zip(pool, sol) if c})


def positive_weight_nullhomotopy(M: FreeCDGA, grading: Mapping[str, int], phi: Morphism,
                                 ledger: Optional[WeightLedger] = None):
    """Homotopy from 0 (t=0) to phi (t=1) built from a positive grading.

    Phi(v) = phi(v) t^i + c(v) i t^(i-1) dt with i the weight of v and
    dc(v) = (-1)^(k+1) phi(v) + c(dv), where c(dv) is the coefficient of
    i t^(i-1) dt in Phi(dv). Returns (Phi, extension, primitives).
    """
    grading = WeightGrading(grading)
    grading.validate(M)
    if any(grading.get(g.name, 0) < 1 for g in M.generators):
        raise InvalidGrading("every generator needs a positive weight")
    ext = AntiderivativeExtension(phi.target, ledger)
    images: Dict[str, CylinderElement] = {}
    prims: Dict[str, Element] = {}
    done: List[str] = []
    for v in generator_order(M):
        i = grading[v]
        k = M.degrees[M.index[v]]
        dv = M.diff[M.index[v]]
        if dv:
            lower = Homotopy(M.subalgebra(done), ext.algebra, images).apply(dv)
            c_dv = lower.terms.get((i - 1, 1), ext.algebra.zero()).scale(Fraction(1, i))
        else:
            c_dv = ext.algebra.zero()
        dc = phi.images[v].scale((-1) ** (k + 1)) + c_dv
        c = ext.primitive(f"c({v})", dc)
        prims[v] = c
        images[v] = (CylinderElement.tensor(ext.algebra.embed(phi.images[v]), i)
                     + CylinderElement.tensor(ext.algebra.embed(c), i - 1, 1).scale(i))
        done.append(v)
    H = Homotopy(M, ext.algebra, images)
    return H, ext, prims


def better_bound_violations(result: PeriodsResult) -> Dict[str, Tuple[Fraction, int]]:
    """Generators whose homotopy coefficients exceed weight 2k - 2."""
    out = {}
    H, ledger = result.homotopy, result.ledger
    for g in H.source.generators:
        img = H.images[g.name]
        w = max((ledger.weight(a) for a in img.terms.values()), default=Fraction(0))
        if w > 2 * g.degree - 2:
            out[g.name] = (w, 2 * g.degree - 2)
    return out
