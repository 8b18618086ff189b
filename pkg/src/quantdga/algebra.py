"""Free graded-commutative differential algebras over the rationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import AlgebraMismatch, DegreeCapExceeded, DegreeMismatch, NonSquareZero
from .linalg import Echelon

# A monomial is a tuple of (generator index, exponent) pairs sorted by index.
Monomial = Tuple[Tuple[int, int], ...]
ONE: Monomial = ()

Scalar = Union[int, Fraction]
DEFAULT_DEGREE_CAP = 24


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    weight: Optional[int] = None


def _plain(name: str) -> bool:
    return name.replace("_", "a").isalnum() and not name[0].isdigit()


class FreeCDGA:
    """A free graded-commutative algebra on named generators with a differential.

    ``top_degree`` optionally truncates: every element of larger degree is
    zero. The truncated object is still a CDGA and is used as a stand-in for
    forms on a manifold of that dimension.

    ``atom_cap = (names, k)`` additionally kills every monomial whose degree
    counted over the named generators exceeds k. This models pulled-back forms:
    products of pullbacks vanish above the dimension of the space they come
    from. The killed monomials span a d-stable ideal whenever d of a named
    generator is a polynomial in named generators.
    """

    def __init__(self, generators: Sequence[Generator], differentials=None, *,
                 top_degree: Optional[int] = None, degree_cap: int = DEFAULT_DEGREE_CAP,
                 name: Optional[str] = None, check: bool = True,
                 atom_cap: Optional[Tuple[Iterable[str], int]] = None):
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for g in generators:
            if g.degree < 1:
                raise DegreeMismatch(f"generator {g.name} has degree {g.degree} < 1")
        self.name = name
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self.index: Dict[str, int] = {n: i for i, n in enumerate(names)}
        self.degrees: Tuple[int, ...] = tuple(g.degree for g in generators)
        self.odd: Tuple[bool, ...] = tuple(d % 2 == 1 for d in self.degrees)
        self.top_degree = top_degree
        self.degree_cap = degree_cap
        if atom_cap is not None:
            atom_cap = (frozenset(atom_cap[0]), int(atom_cap[1]))
        self.atom_cap = atom_cap
        self._atom_deg = tuple(g.degree if atom_cap and g.name in atom_cap[0] else 0
                               for g in generators)
        self._mul_cache: Dict[Tuple[Monomial, Monomial], Optional[Tuple[int, Monomial]]] = {}
        self._d_cache: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        self._basis_cache: Dict[int, List[Monomial]] = {}
        self._index_cache: Dict[int, Dict[Monomial, int]] = {}
        self._echelon_cache: Dict[int, Echelon] = {}
        self._embed_cache: Dict[int, Tuple["FreeCDGA", Optional[Tuple[int, ...]]]] = {}
        self.diff: Tuple["Element", ...] = tuple(Element(self, {}) for _ in generators)
        self._constructing = True
        differentials = differentials or {}
        if callable(differentials):
            differentials = differentials(self)
        imgs = []
        for g in generators:
            raw = differentials.get(g.name, 0)
            imgs.append(self.coerce(raw))
        for g, img in zip(generators, imgs):
            if img and img.degree() != g.degree + 1:
                raise DegreeMismatch(
                    f"d({g.name}) has degree {img.degree()}, expected {g.degree + 1}")
        self.diff = tuple(imgs)
        self._constructing = False
        self._embed_cache.clear()
        if check:
            for g, img in zip(generators, imgs):
                dd = img.d()
                if dd:
                    raise NonSquareZero(g.name, dd)
        self.minimal = self._check_minimal()

    # construction helpers --------------------------------------------
    def _check_minimal(self) -> bool:
        for i, g in enumerate(self.generators):
            for m in self.diff[i].terms:
                if any(self.degrees[j] >= g.degree for j, _ in m):
                    return False
        return True

    def extend(self, generators: Sequence[Generator], differentials=None, *,
               name: Optional[str] = None, check: bool = True) -> "FreeCDGA":
        """New algebra with extra generators appended after the existing ones."""
        old = {g.name: self.diff[i] for i, g in enumerate(self.generators)}

        def diffs(alg):
            out = {n: alg.embed(e) for n, e in old.items()}
            extra = differentials(alg) if callable(differentials) else (differentials or {})
            for n, e in extra.items():
                out[n] = alg.coerce(e)
            return out

        return FreeCDGA(list(self.generators) + list(generators), diffs,
                        top_degree=self.top_degree, degree_cap=self.degree_cap,
                        name=name or self.name, check=check, atom_cap=self.atom_cap)

    def truncated(self, top_degree: Optional[int]) -> "FreeCDGA":
        diffs = {g.name: self.diff[i] for i, g in enumerate(self.generators)}
        return FreeCDGA(self.generators, lambda a: {n: a.embed(e) for n, e in diffs.items()},
                        top_degree=top_degree, degree_cap=self.degree_cap, name=self.name,
                        atom_cap=self.atom_cap)

    def subalgebra(self, names: Iterable[str], name: Optional[str] = None) -> "FreeCDGA":
        """Sub-algebra on the given generators (kept in declaration order)."""
        keep = set(names)
        gens = [g for g in self.generators if g.name in keep]
        diffs = {g.name: self.diff[self.index[g.name]] for g in gens}
        for g in gens:
            for m in diffs[g.name].terms:
                for j, _ in m:
                    if self.generators[j].name not in keep:
                        raise AlgebraMismatch(
                            f"d({g.name}) uses {self.generators[j].name}, outside the sub-algebra")
        return FreeCDGA(gens, lambda a: {n: a.embed(e) for n, e in diffs.items()},
                        top_degree=self.top_degree, degree_cap=self.degree_cap,
                        name=name or self.name, atom_cap=self.atom_cap)

    def through_degree(self, k: int) -> "FreeCDGA":
        return self.subalgebra([g.name for g in self.generators if g.degree <= k])

    # element constructors ---------------------------------------------
    def gen(self, name: str) -> "Element":
        return Element(self, {((self.index[name], 1),): Fraction(1)})

    def __getitem__(self, name: str) -> "Element":
        return self.gen(name)

    def one(self) -> "Element":
        return Element(self, {ONE: Fraction(1)})

    def zero(self) -> "Element":
        return Element(self, {})

    def scalar(self, c: Scalar) -> "Element":
        c = Fraction(c)
        return Element(self, {ONE: c} if c else {})

    def coerce(self, x) -> "Element":
        if isinstance(x, Element):
            return self.embed(x)
        if isinstance(x, (int, Fraction)):
            return self.scalar(x)
        if isinstance(x, str):
            from .presentation import parse_element
            return parse_element(self, x)
        raise TypeError(f"cannot interpret {x!r} as an element")

    def el(self, text: str) -> "Element":
        return self.coerce(text)

    def d(self, name: str) -> "Element":
        return self.diff[self.index[name]]

    # embedding between algebras ---------------------------------------
    def _embedding_from(self, other: "FreeCDGA") -> Tuple[int, ...]:
        """Index map other -> self; -1 marks generators that cannot be carried over.

        A generator carries over when a generator of the same name and degree
        exists here and the two differentials agree.
        """
        key = id(other)
        hit = self._embed_cache.get(key)
        if hit is not None and hit[0] is other:
            return hit[1]
        mapping = []
        for g in other.generators:
            j = self.index.get(g.name)
            mapping.append(j if j is not None and self.degrees[j] == g.degree else -1)
        if self.top_degree is not None and (other.top_degree is None
                                            or other.top_degree > self.top_degree):
            pass  # projecting onto a truncation is an algebra map
        elif other.top_degree is not None and (self.top_degree is None
                                               or other.top_degree < self.top_degree):
            mapping = [-1] * len(mapping)
        if other.atom_cap is not None and (
                self.atom_cap is None or not other.atom_cap[0] <= self.atom_cap[0]
                or self.atom_cap[1] > other.atom_cap[1]):
            mapping = [-1] * len(mapping)
        if not self._constructing:
            changed = True
            while changed:
                changed = False
                for i, j in enumerate(mapping):
                    if j < 0:
                        continue
                    terms = other.diff[i].terms
                    if any(mapping[k] < 0 for m in terms for k, _ in m) or \
                            self._map_terms(terms, mapping) != self.diff[j].terms:
                        mapping[i] = -1
                        changed = True
        idx = tuple(mapping)
        if not self._constructing:
            self._embed_cache[key] = (other, idx)
        return idx

    def _map_terms(self, terms, idx) -> Dict[Monomial, Fraction]:
        out: Dict[Monomial, Fraction] = {}
        for m, c in terms.items():
            sign, nm = self._reorder([(idx[i], e) for i, e in m])
            if nm is None:
                continue
            v = out.get(nm, 0) + sign * c
            if v:
                out[nm] = v
            else:
                out.pop(nm, None)
        return out

    def _reorder(self, pairs) -> Tuple[int, Optional[Monomial]]:
        """Sort factor list into canonical order, returning the Koszul sign."""
        sign = 1
        res: Monomial = ONE
        for p in pairs:
            r = self.mul_mono(res, (p,))
            if r is None:
                return 0, None
            s, res = r
            sign *= s
        return sign, res

    def embed(self, x: "Element") -> "Element":
        if x.alg is self:
            return x
        idx = self._embedding_from(x.alg)
        if any(idx[i] < 0 for m in x.terms for i, _ in m):
            raise AlgebraMismatch(
                f"element of {x.alg.describe()} does not embed into {self.describe()}")
        return Element(self, self._map_terms(x.terms, idx))

    def contains(self, other: "FreeCDGA") -> bool:
        return other is self or all(j >= 0 for j in self._embedding_from(other))

    # monomial arithmetic -------------------------------------------------
    def mono_degree(self, m: Monomial) -> int:
        return sum(self.degrees[i] * e for i, e in m)

    def atom_degree(self, m: Monomial) -> int:
        return sum(self._atom_deg[i] * e for i, e in m)

    def mul_mono(self, a: Monomial, b: Monomial) -> Optional[Tuple[int, Monomial]]:
        if not a:
            return 1, b
        if not b:
            return 1, a
        key = (a, b)
        if key in self._mul_cache:
            return self._mul_cache[key]
        odd = self.odd
        top = self.top_degree
        result: Optional[Tuple[int, Monomial]]
        if top is not None and self.mono_degree(a) + self.mono_degree(b) > top:
            result = None
        elif self.atom_cap is not None and (self.atom_degree(a) + self.atom_degree(b)
                                            > self.atom_cap[1]):
            result = None
        else:
            # sign: every odd factor of b moves left past the odd factors of a with larger index
            sign = 1
            zero = False
            exps: Dict[int, int] = dict(a)
            for j, f in b:
                if odd[j]:
                    if j in exps:
                        zero = True
                        break
                    passed = sum(1 for i, e in a if i > j and odd[i])
                    if passed % 2:
                        sign = -sign
                exps[j] = exps.get(j, 0) + f
            result = None if zero else (sign, tuple(sorted(exps.items())))
        self._mul_cache[key] = result
        return result

    def d_mono(self, m: Monomial) -> Dict[Monomial, Fraction]:
        hit = self._d_cache.get(m)
        if hit is not None:
            return hit
        out: Dict[Monomial, Fraction] = {}
        prefix_deg = 0
        for pos, (i, e) in enumerate(m):
            dg = self.diff[i]
            if dg.terms:
                sign = -1 if prefix_deg % 2 else 1
                prefix = m[:pos]
                suffix = m[pos + 1:]
                core: Monomial = ((i, e - 1),) if e > 1 else ONE
                coef0 = Fraction(sign * e)
                for dm, dc in dg.terms.items():
                    r1 = self.mul_mono(prefix, core)
                    if r1 is None:
                        continue
                    r2 = self.mul_mono(r1[1], dm)
                    if r2 is None:
                        continue
                    r3 = self.mul_mono(r2[1], suffix)
                    if r3 is None:
                        continue
                    s = r1[0] * r2[0] * r3[0]
                    nm = r3[1]
                    v = out.get(nm, 0) + coef0 * s * dc
                    if v:
                        out[nm] = v
                    else:
                        out.pop(nm, None)
            prefix_deg += self.degrees[i] * e
        self._d_cache[m] = out
        return out

    # graded pieces ---------------------------------------------------------
    def graded_basis(self, degree: int) -> List[Monomial]:
        if degree < 0:
            return []
        if degree > self.degree_cap:
            raise DegreeCapExceeded(f"degree {degree} exceeds cap {self.degree_cap}")
        hit = self._basis_cache.get(degree)
        if hit is not None:
            return hit
        if self.top_degree is not None and degree > self.top_degree:
            out: List[Monomial] = []
        else:
            out = []
            n = len(self.generators)

            def rec(i: int, remaining: int, acc: list):
                if remaining == 0:
                    out.append(tuple(acc))
                    return
                if i == n:
                    return
                deg = self.degrees[i]
                maxe = 1 if self.odd[i] else remaining // deg
                maxe = min(maxe, remaining // deg)
                rec(i + 1, remaining, acc)
                for e in range(1, maxe + 1):
                    acc.append((i, e))
                    rec(i + 1, remaining - e * deg, acc)
                    acc.pop()

            rec(0, degree, [])
            if self.atom_cap is not None:
                out = [m for m in out if self.atom_degree(m) <= self.atom_cap[1]]
            out.sort()
        self._basis_cache[degree] = out
        self._index_cache[degree] = {m: k for k, m in enumerate(out)}
        return out

    def basis_index(self, degree: int) -> Dict[Monomial, int]:
        self.graded_basis(degree)
        return self._index_cache[degree]

    def to_vector(self, x: "Element", degree: int) -> Dict[int, Fraction]:
        idx = self.basis_index(degree)
        return {idx[m]: c for m, c in x.terms.items()}

    def from_vector(self, v: Mapping[int, Fraction], degree: int) -> "Element":
        basis = self.graded_basis(degree)
        return Element(self, {basis[k]: Fraction(c) for k, c in v.items() if c})

    def d_echelon(self, degree: int) -> Echelon:
        """Echelon form of d applied to the degree-``degree`` basis (tags = basis positions)."""
        hit = self._echelon_cache.get(degree)
        if hit is not None:
            return hit
        ech = Echelon()
        self._kernel_cache = getattr(self, "_kernel_cache", {})
        kernel = []
        for k, m in enumerate(self.graded_basis(degree)):
            dm = Element(self, self.d_mono(m))
            rel = ech.add(self.to_vector(dm, degree + 1), k)
            if rel is not None:
                kernel.append(rel)
        self._echelon_cache[degree] = ech
        self._kernel_cache[degree] = kernel
        return ech

    def cocycle_basis(self, degree: int) -> List["Element"]:
        self.d_echelon(degree)
        return [self.from_vector(rel, degree) for rel in self._kernel_cache[degree]]

    def describe(self) -> str:
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        label = self.name or "algebra"
        return f"{label}<{gens}>"

    def __repr__(self) -> str:
        return f"FreeCDGA({self.describe()})"


class Element:
    """A sparse rational combination of monomials in a fixed algebra."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeCDGA, terms: Dict[Monomial, Fraction]):
        self.alg = alg
        self.terms = terms

    # helpers ------------------------------------------------------------
    def _lift(self, other) -> Tuple["Element", "Element"]:
        if isinstance(other, (int, Fraction)):
            return self, self.alg.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented, NotImplemented  # type: ignore[return-value]
        if other.alg is self.alg:
            return self, other
        if self.alg.contains(other.alg):
            return self, self.alg.embed(other)
        if other.alg.contains(self.alg):
            return other.alg.embed(self), other
        raise AlgebraMismatch(
            f"{self.alg.describe()} and {other.alg.describe()} are unrelated")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other):
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        out = dict(a.terms)
        for m, c in b.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                del out[m]
        return Element(a.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Element)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Element":
        c = Fraction(c)
        if not c:
            return Element(self.alg, {})
        return Element(self.alg, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        a, b = self._lift(other)
        if a is NotImplemented:
            return NotImplemented
        alg = a.alg
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                r = alg.mul_mono(m1, m2)
                if r is None:
                    continue
                s, m = r
                v = out.get(m, 0) + s * c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Element(alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, c):
        return self.scale(1 / Fraction(c))

    def __pow__(self, n: int):
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == self.alg.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        try:
            a, b = self._lift(other)
        except AlgebraMismatch:
            return False
        return a.terms == b.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # structure ----------------------------------------------------------
    def d(self) -> "Element":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for dm, dc in self.alg.d_mono(m).items():
                v = out.get(dm, 0) + c * dc
                if v:
                    out[dm] = v
                else:
                    out.pop(dm, None)
        return Element(self.alg, out)

    def degrees(self) -> List[int]:
        return sorted({self.alg.mono_degree(m) for m in self.terms})

    def degree(self) -> int:
        degs = self.degrees()
        if not degs:
            raise DegreeMismatch("the zero element has no degree")
        if len(degs) > 1:
            raise DegreeMismatch(f"inhomogeneous element with degrees {degs}")
        return degs[0]

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_parts(self) -> Dict[int, "Element"]:
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.alg.mono_degree(m), {})[m] = c
        return {k: Element(self.alg, v) for k, v in sorted(parts.items())}

    def parity_twist(self) -> "Element":
        """sum over terms of (-1)^deg * term."""
        deg = self.alg.mono_degree
        return Element(self.alg, {m: (-c if deg(m) % 2 else c) for m, c in self.terms.items()})

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items())

    def monomial_str(self, m: Monomial) -> str:
        parts = []
        for i, e in m:
            n = self.alg.generators[i].name
            if e == 1:
                parts.append(n)
            else:
                parts.append(f"{n}^{e}" if _plain(n) else f"({n})^{e}")
        return " ^ ".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            body = self.monomial_str(m)
            if k == 0:
                out.append(f"{c} * {body}" if body else f"{c}")
            else:
                sign = "+" if c > 0 else "-"
                out.append(f" {sign} {abs(c)} * {body}" if body else f" {sign} {abs(c)}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Element({self})"


# free functions matching the public operation names ------------------------

def make_free_cdga(generators, differentials=None, **kw) -> FreeCDGA:
    gens = [g if isinstance(g, Generator) else Generator(*g) for g in generators]
    return FreeCDGA(gens, differentials, **kw)


def multiply(a: Element, b: Element) -> Element:
    if a.alg is not b.alg:
        raise AlgebraMismatch("multiply expects elements of the same algebra")
    return a * b


def differentiate(a: Element) -> Element:
    return a.d()


def graded_basis(A: FreeCDGA, degree: int) -> List[Monomial]:
    return A.graded_basis(degree)


def solve_d(A: FreeCDGA, target: Element) -> Optional[Element]:
    """A primitive of ``target`` (lexicographically least), or None if not exact."""
    target = A.embed(target)
    if not target:
        return A.zero()
    k = target.degree() - 1
    if k < 0:
        return None
    ech = A.d_echelon(k)
    combo = ech.express(A.to_vector(target, k + 1))
    if combo is None:
        return None
    return A.from_vector(combo, k)


def is_exact(A: FreeCDGA, x: Element) -> bool:
    return solve_d(A, x) is not None


def cohomology_dim(A: FreeCDGA, degree: int) -> int:
    if degree < 0:
        return 0
    n = len(A.graded_basis(degree))
    rank_out = A.d_echelon(degree).rank
    rank_in = A.d_echelon(degree - 1).rank if degree >= 1 else 0
    return n - rank_out - rank_in


def cohomology_dims(A: FreeCDGA, upto: int) -> List[int]:
    return [cohomology_dim(A, k) for k in range(upto + 1)]
