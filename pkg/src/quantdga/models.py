"""Minimal models: catalog, Hirsch extensions, construction, weights and filtrations."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import Element, FreeCDGA, Generator, cohomology_dim, solve_d
from .errors import (DegreeCapExceeded, DegreeMismatch, InvalidGrading, NotClosed,
                     NotSimplyConnected, UnknownModel)
from .linalg import Echelon
from .morphisms import Morphism

# ---------------------------------------------------------------- catalog


def _model(name, gens, diffs, dimension=None) -> FreeCDGA:
    A = FreeCDGA([Generator(n, d) for n, d in gens], lambda a: {k: a.el(v) for k, v in diffs.items()},
                 name=name)
    A.space_dimension = dimension
    return A


def sphere_model(n: int) -> FreeCDGA:
    if n < 2:
        raise UnknownModel(f"S{n}: spheres below dimension 2 are not simply connected")
    if n % 2:
        return _model(f"S{n}", [("a", n)], {}, n)
    return _model(f"S{n}", [("a", n), ("b", 2 * n - 1)], {"b": "a^2"}, n)


_CATALOG = {
    "S2": lambda: _model("S2", [("x", 2), ("y", 3)], {"y": "x^2"}, 2),
    "S3vS3": lambda: _model("S3vS3", [("x1", 3), ("x2", 3), ("y", 5), ("z1", 7), ("z2", 7)],
                            {"y": "x1*x2", "z1": "x1*y", "z2": "x2*y"}, 6),
    "NF": lambda: _model("NF", [("x", 3), ("y", 3), ("z", 5), ("T", 10)],
                         {"z": "x*y", "T": "x*y*z"}, 8),
    "NF_alt": lambda: _model("NF_alt", [("x1", 3), ("x2", 3), ("y", 5), ("T", 10)],
                             {"y": "x1*x2", "T": "x1*x2*y"}, 8),
    "CP2": lambda: _model("CP2", [("x", 2), ("q", 5)], {"q": "x^3"}, 4),
    "EpsSource": lambda: _model("EpsSource", [("a", 4), ("b", 7)], {"b": "a^2"}, 4),
    "EpsTarget": lambda: _model("EpsTarget", [("x", 3), ("y", 4), ("z", 7)],
                                     {"z": "y^2"}, 7),
}


def catalog_names() -> List[str]:
    return sorted(_CATALOG) + ["S<n>"]


def canned_model(name: str) -> FreeCDGA:
    if name in _CATALOG:
        return _CATALOG[name]()
    m = re.fullmatch(r"S(\d+)", name)
    if m:
        return sphere_model(int(m.group(1)))
    raise UnknownModel(f"no canned model named {name!r}; known: {', '.join(catalog_names())}")


def space_dimension(A: FreeCDGA) -> Optional[int]:
    return getattr(A, "space_dimension", None)


def isomorphic_by_renaming(A: FreeCDGA, B: FreeCDGA) -> Optional[Dict[str, str]]:
    """A degree-preserving renaming A -> B carrying d to d, if one exists."""
    if sorted(A.degrees) != sorted(B.degrees):
        return None
    by_deg: Dict[int, Tuple[List[str], List[str]]] = {}
    for g in A.generators:
        by_deg.setdefault(g.degree, ([], []))[0].append(g.name)
    for g in B.generators:
        by_deg[g.degree][1].append(g.name)
    blocks = sorted(by_deg.items())
    perms = [list(itertools.permutations(tb)) for _, (ta, tb) in blocks]
    for choice in itertools.product(*perms):
        ren = {}
        for (_, (ta, _)), p in zip(blocks, choice):
            ren.update(zip(ta, p))
        phi = Morphism(A, B, {a: B.gen(b) for a, b in ren.items()})
        if phi.is_chain_map():
            return ren
    return None


# ---------------------------------------------------------------- extensions


@dataclass
class HirschExtension:
    generators: List[Generator]
    images: Dict[str, object]


def hirsch_extend(base: FreeCDGA, ext: HirschExtension, name: Optional[str] = None) -> FreeCDGA:
    degs = {g.degree for g in ext.generators}
    if len(degs) > 1:
        raise DegreeMismatch(f"a Hirsch extension adds generators of one degree, got {sorted(degs)}")
    for g in ext.generators:
        img = base.coerce(ext.images.get(g.name, 0))
        if img.d():
            raise NotClosed(f"d({g.name}) = {img} is not closed")
        if img and img.degree() != g.degree + 1:
            raise DegreeMismatch(f"d({g.name}) must have degree {g.degree + 1}")
    imgs = {g.name: ext.images.get(g.name, 0) for g in ext.generators}
    return base.extend(ext.generators, lambda a: {n: a.coerce(v) for n, v in imgs.items()},
                       name=name)


def minimal_model_of(A: FreeCDGA, up_to_degree: int, prefix: str = "v") -> Tuple[FreeCDGA, Morphism]:
    """Minimal model through ``up_to_degree`` with its comparison map into A.

    Stage n adds closed degree-n generators for classes missing from the
    image, then degree-n generators killing the kernel in degree n+1.
    Choices come from the echelon order of the graded bases, so the output is
    deterministic.
    """
    if up_to_degree + 1 > A.degree_cap:
        raise DegreeCapExceeded(f"need degree {up_to_degree + 1} > cap {A.degree_cap}")
    if cohomology_dim(A, 0) != 1 or cohomology_dim(A, 1) != 0:
        raise NotSimplyConnected("need H^0 = Q and H^1 = 0")
    M = FreeCDGA([], {}, name=(A.name or "A") + "_min")
    images: Dict[str, Element] = {}
    for n in range(2, up_to_degree + 1):
        m = Morphism(M, A, images)
        # surjectivity in degree n
        ech = Echelon()
        for k, mon in enumerate(A.graded_basis(n - 1)):
            ech.add(A.to_vector(Element(A, A.d_mono(mon)), n), ("b", k))
        for k, z in enumerate(M.cocycle_basis(n)):
            ech.add(A.to_vector(m.apply(z), n), ("m", k))
        new_closed: List[Element] = []
        for k, z in enumerate(A.cocycle_basis(n)):
            if ech.add(A.to_vector(z, n), ("z", k)) is None:
                new_closed.append(z)
        gens = [Generator(f"{prefix}{n}_{j + 1}", n) for j in range(len(new_closed))]
        if gens:
            M = M.extend(gens, {}, name=M.name)
            for g, z in zip(gens, new_closed):
                images[g.name] = z
            m = Morphism(M, A, images)
        # injectivity in degree n+1
        basis_a = A.graded_basis(n)
        ech_a = Echelon()
        for k, mon in enumerate(basis_a):
            ech_a.add(A.to_vector(Element(A, A.d_mono(mon)), n + 1), ("b", k))
        zs = M.cocycle_basis(n + 1)
        kernel: List[Tuple[Element, Element]] = []
        for i, z in enumerate(zs):
            rel = ech_a.add(A.to_vector(m.apply(z), n + 1), ("z", i))
            if rel is None:
                continue
            coeff_z = {t[1]: c for t, c in rel.items() if t[0] == "z"}
            zc = M.zero()
            for j, c in coeff_z.items():
                zc = zc + zs[j].scale(c)
            # m(zc) = d(a); recover a exactly
            a = solve_d(A, m.apply(zc))
            kernel.append((zc, a if a is not None else A.zero()))
        ech_m = Echelon()
        for k, mon in enumerate(M.graded_basis(n)):
            ech_m.add(M.to_vector(Element(M, M.d_mono(mon)), n + 1), ("b", k))
        killers = []
        for i, (zc, a) in enumerate(kernel):
            if ech_m.add(M.to_vector(zc, n + 1), ("k", i)) is None:
                killers.append((zc, a))
        offset = len(new_closed)
        gens = [Generator(f"{prefix}{n}_{offset + j + 1}", n) for j in range(len(killers))]
        if gens:
            diffs = {g.name: zc for g, (zc, _) in zip(gens, killers)}
            M = M.extend(gens, lambda alg: {k: alg.embed(v) for k, v in diffs.items()}, name=M.name)
            for g, (_, a) in zip(gens, killers):
                images[g.name] = a
    return M, Morphism(M, A, images)


# ---------------------------------------------------------------- weights


class WeightGrading(dict):
    """generator name -> positive integer weight."""

    def validate(self, M: FreeCDGA) -> None:
        for g in M.generators:
            w = self.get(g.name)
            if w is None or w < 1:
                raise InvalidGrading(f"generator {g.name} needs a positive weight")
        for i, g in enumerate(M.generators):
            for mon in M.diff[i].terms:
                tot = sum(self[M.generators[j].name] * e for j, e in mon)
                if tot != self[g.name]:
                    raise InvalidGrading(
                        f"d({g.name}) has a term of weight {tot}, expected {self[g.name]}")

    def is_valid(self, M: FreeCDGA) -> bool:
        try:
            self.validate(M)
        except InvalidGrading:
            return False
        return True


def weight_constraints(M: FreeCDGA) -> List[List[int]]:
    rows = []
    n = len(M.generators)
    for i in range(n):
        for mon in M.diff[i].terms:
            row = [0] * n
            for j, e in mon:
                row[j] += e
            row[i] -= 1
            rows.append(row)
    return rows


def detect_positive_weights(M: FreeCDGA) -> Optional[WeightGrading]:
    """Smallest positive integer grading making each d(v) homogeneous, if any.

    Minimises the total weight subject to the balance equations and w >= 1,
    then rescales to the primitive integer vector on that ray.
    """
    from .lp import linprog
    n = len(M.generators)
    if n == 0:
        return WeightGrading()
    rows = weight_constraints(M)
    # w = 1 + u, u >= 0:  rows . u = -rows . 1
    A_eq = [[Fraction(x) for x in r] for r in rows]
    b_eq = [Fraction(-sum(r)) for r in rows]
    res = linprog([Fraction(1)] * n, A_eq=A_eq, b_eq=b_eq)
    if res.status != "optimal":
        return None
    w = [1 + x for x in res.x]
    den = 1
    for x in w:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in w]
    g = 0
    for x in ints:
        g = gcd(g, x)
    grading = WeightGrading({gen.name: x // g for gen, x in zip(M.generators, ints)})
    grading.validate(M)
    return grading


def split_grading(M: FreeCDGA, W0: Sequence[str], W1: Sequence[str]) -> WeightGrading:
    """Weights deg(w) on W0 and deg(w)+1 on W1, validated."""
    gr = WeightGrading()
    for n in W0:
        gr[n] = M.degrees[M.index[n]]
    for n in W1:
        gr[n] = M.degrees[M.index[n]] + 1
    gr.validate(M)
    return gr


@dataclass
class SymbolicScaling:
    """v -> L^{w(v)} v for an indeterminate L."""

    algebra: FreeCDGA
    exponents: Dict[str, int]

    def at(self, scale) -> Morphism:
        s = Fraction(scale)
        M = self.algebra
        return Morphism(M, M, {n: M.gen(n).scale(s ** e) for n, e in self.exponents.items()})

    def describe(self) -> str:
        return ", ".join(f"{n} -> L^{e} {n}" for n, e in self.exponents.items())


def apply_grading_automorphism(M: FreeCDGA, grading: Mapping[str, int],
                               scale: Union[int, Fraction, str]) -> Union[Morphism, SymbolicScaling]:
    gr = WeightGrading(grading)
    if isinstance(scale, str):
        # an identity in L holds iff every monomial of every d(v) has weight w(v)
        gr.validate(M)
        return SymbolicScaling(M, {g.name: gr[g.name] for g in M.generators})
    s = Fraction(scale)
    phi = Morphism(M, M, {g.name: M.gen(g.name).scale(s ** gr.get(g.name, 0)) for g in M.generators})
    if not phi.is_chain_map():
        raise InvalidGrading("scaling does not commute with d")
    return phi


# ---------------------------------------------------------------- filtration


@dataclass
class WeightFiltration:
    levels: List[List[str]]  # levels[j-1] = W_j as generator names in declaration order

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level_of(self, name: str) -> int:
        for j, lvl in enumerate(self.levels, start=1):
            if name in lvl:
                return j
        raise KeyError(name)


def weight_filtration(M: FreeCDGA, up_to_degree: Optional[int] = None) -> WeightFiltration:
    names = [g.name for g in M.generators
             if up_to_degree is None or g.degree <= up_to_degree]
    uses = {}
    for i, g in enumerate(M.generators):
        uses[g.name] = {M.generators[j].name for mon in M.diff[i].terms for j, _ in mon}
    levels: List[List[str]] = []
    prev: set = set()
    while True:
        cur = [n for n in names if uses[n] <= prev]
        if set(cur) == prev:
            break
        levels.append(cur)
        prev = set(cur)
    return WeightFiltration(levels)


# ---------------------------------------------------------------- Hurewicz


def hurewicz_image(M: FreeCDGA, n: int) -> List[Dict[str, Fraction]]:
    """Basis of the indecomposable parts of closed degree-n elements."""
    gens = [(i, g.name) for i, g in enumerate(M.generators) if g.degree == n]
    ech = Echelon()
    out = []
    for z in M.cocycle_basis(n):
        vec = {i: z.terms[((i, 1),)] for i, _ in gens if ((i, 1),) in z.terms}
        if vec and ech.add(vec, len(out)) is None:
            out.append(vec)
    # report the reduced rows for a canonical basis
    names = dict(gens)
    return [{names[i]: c for i, c in sorted(row.items())} for _, row in sorted(ech.rows.items())]


def predict_distortion_exponent(M: FreeCDGA, n: int,
                                alpha_dual: Union[str, Mapping[str, object]]) -> Fraction:
    """1/n if the functional pairs nontrivially with the Hurewicz image, else 1/(n+1)."""
    if isinstance(alpha_dual, str):
        alpha_dual = {alpha_dual: 1}
    for name in alpha_dual:
        if name not in M.index or M.degrees[M.index[name]] != n:
            raise DegreeMismatch(f"{name} is not a degree-{n} generator")
    for vec in hurewicz_image(M, n):
        if sum(Fraction(c) * vec.get(g, 0) for g, c in alpha_dual.items()):
            return Fraction(1, n)
    return Fraction(1, n + 1)
