"""Simplicial pairs, relative (co)chains, isoperimetric constants and rounding.

Simplices are sorted vertex tuples oriented by that order; the i-th face
(drop vertex i) carries the sign (-1)^i. Relative cochains vanish on A and
relative chains live on the simplices outside A.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import NotABoundary, NotACoboundary, TooLarge
from .linalg import column_basis, matvec, nullspace, rank, rref, solve
from .lp import linprog

Simplex = Tuple[int, ...]
DEFAULT_CAP = 12


def faces(s: Simplex) -> List[Tuple[int, Simplex]]:
    """(sign, face) pairs of the boundary of s."""
    if len(s) <= 1:
        return []
    return [((-1) ** i, s[:i] + s[i + 1:]) for i in range(len(s))]


class SimplicialPair:
    """A finite simplicial complex X with a subcomplex A, both closed under faces."""

    def __init__(self, simplices: Iterable[Sequence[int]], relative: Iterable[Sequence[int]] = (),
                 name: Optional[str] = None):
        self.name = name
        X = self._closure(simplices)
        A = self._closure(relative)
        if not A <= X:
            extra = sorted(A - X)[0]
            raise ValueError(f"simplex {extra} of A is not in X")
        self._all = X
        self.A = frozenset(A)
        self.simplices: Dict[int, List[Simplex]] = {}
        for s in sorted(X, key=lambda s: (len(s), s)):
            self.simplices.setdefault(len(s) - 1, []).append(s)
        self.vertices = sorted({v for s in X for v in s})
        self._cells: Dict[int, List[Simplex]] = {}
        self._bd: Dict[int, List[List[Fraction]]] = {}

    @staticmethod
    def _closure(simplices) -> set:
        out = set()
        for s in simplices:
            s = tuple(sorted(int(v) for v in s))
            if len(set(s)) != len(s) or not s:
                raise ValueError(f"bad simplex {s}")
            for r in range(1, len(s) + 1):
                out.update(itertools.combinations(s, r))
        return out

    @property
    def dim(self) -> int:
        return max(self.simplices, default=-1)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def maximal_simplices(self) -> List[Simplex]:
        out = []
        for s in self._all:
            if not any(len(t) == len(s) + 1 and set(s) <= set(t)
                       for t in self.simplices.get(len(s), [])):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), s))

    def cells(self, k: int) -> List[Simplex]:
        """k-simplices outside A: the basis of relative k-(co)chains."""
        if k not in self._cells:
            self._cells[k] = [s for s in self.simplices.get(k, []) if s not in self.A]
        return self._cells[k]

    def boundary_matrix(self, k: int) -> List[List[Fraction]]:
        """Relative boundary C_k -> C_{k-1}: rows are (k-1)-cells, columns k-cells."""
        if k not in self._bd:
            rows = {s: i for i, s in enumerate(self.cells(k - 1))}
            cols = self.cells(k)
            m = [[Fraction(0)] * len(cols) for _ in rows]
            for j, s in enumerate(cols):
                for sign, f in faces(s):
                    i = rows.get(f)
                    if i is not None:
                        m[i][j] += sign
            self._bd[k] = m
        return self._bd[k]

    def coboundary_matrix(self, k: int) -> List[List[Fraction]]:
        """Relative coboundary C^{k-1} -> C^k: the transpose of the boundary matrix."""
        bd = self.boundary_matrix(k)
        ncol = len(self.cells(k - 1))
        return [[bd[i][j] for i in range(ncol)] for j in range(len(self.cells(k)))]

    def to_text(self) -> str:
        lines = [" ".join(map(str, s)) for s in self.maximal_simplices()]
        if self.A:
            maxA = [s for s in self.A if not any(len(t) == len(s) + 1 and set(s) <= set(t)
                                                 for t in self.A)]
            lines.append("A:")
            lines += [" ".join(map(str, s)) for s in sorted(maxA, key=lambda s: (len(s), s))]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, name: Optional[str] = None) -> "SimplicialPair":
        """Plain format: one maximal simplex per line, then an optional ``A:`` block."""
        main, rel, cur = [], [], None
        cur = main
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.rstrip(":") == "A":
                cur = rel
                continue
            try:
                cur.append(tuple(int(v) for v in line.replace(",", " ").split()))
            except ValueError:
                raise ValueError(f"cannot read simplex from line {raw!r}") from None
        return cls(main, rel, name=name)

    def __repr__(self):
        counts = {k: len(v) for k, v in self.simplices.items()}
        return f"SimplicialPair({self.name or ''} f={counts}, |A|={len(self.A)})"


# ------------------------------------------------------------------ cochains

@dataclass
class Cochain:
    k: int
    values: Dict[Simplex, Fraction] = field(default_factory=dict)

    def norm(self) -> Fraction:
        return max((abs(v) for v in self.values.values()), default=Fraction(0))

    def vector(self, pair: SimplicialPair) -> List[Fraction]:
        return [Fraction(self.values.get(s, 0)) for s in pair.cells(self.k)]

    @classmethod
    def from_vector(cls, pair: SimplicialPair, k: int, vec) -> "Cochain":
        return cls(k, {s: Fraction(v) for s, v in zip(pair.cells(k), vec) if v})


@dataclass
class Chain:
    k: int
    values: Dict[Simplex, Fraction] = field(default_factory=dict)

    def mass(self) -> Fraction:
        return sum((abs(v) for v in self.values.values()), Fraction(0))

    def vector(self, pair: SimplicialPair) -> List[Fraction]:
        return [Fraction(self.values.get(s, 0)) for s in pair.cells(self.k)]

    @classmethod
    def from_vector(cls, pair: SimplicialPair, k: int, vec) -> "Chain":
        return cls(k, {s: Fraction(v) for s, v in zip(pair.cells(k), vec) if v})


def _relative(pair: SimplicialPair, x, err):
    bad = [s for s, v in x.values.items() if v and s not in set(pair.cells(x.k))]
    if bad:
        raise err(f"{bad[0]} is not a relative {x.k}-cell")


def coboundary(pair: SimplicialPair, a: Cochain) -> Cochain:
    return Cochain.from_vector(pair, a.k + 1, matvec(pair.coboundary_matrix(a.k + 1), a.vector(pair)))


def boundary(pair: SimplicialPair, S: Chain) -> Chain:
    return Chain.from_vector(pair, S.k - 1, matvec(pair.boundary_matrix(S.k), S.vector(pair)))


def _min_linf(m, target) -> Optional[Tuple[List[Fraction], Fraction]]:
    """min ||x||_inf subject to m x = target, or None if infeasible."""
    ncol = len(m[0]) if m else 0
    x0 = solve(m, target) if m else [Fraction(0)] * ncol
    if x0 is None:
        return None
    K = nullspace(m, ncol) if m else nullspace([], ncol)
    if not K:
        return x0, max((abs(v) for v in x0), default=Fraction(0))
    q = len(K)
    # variables: y (free, q of them), s >= 0
    A_ub, b_ub = [], []
    for i in range(ncol):
        row = [K[j][i] for j in range(q)]
        A_ub.append(row + [Fraction(-1)])
        b_ub.append(-x0[i])
        A_ub.append([-v for v in row] + [Fraction(-1)])
        b_ub.append(x0[i])
    res = linprog([0] * q + [1], A_ub, b_ub, free=range(q))
    if res.status != "optimal":
        raise RuntimeError(f"inner LP ended with status {res.status}")
    y = res.x[:q]
    x = [x0[i] + sum(K[j][i] * y[j] for j in range(q)) for i in range(ncol)]
    return x, max((abs(v) for v in x), default=Fraction(0))


def _min_l1(m, target) -> Optional[Tuple[List[Fraction], Fraction]]:
    """min ||x||_1 subject to m x = target, or None if infeasible."""
    ncol = len(m[0]) if m else 0
    x0 = solve(m, target) if m else [Fraction(0)] * ncol
    if x0 is None:
        return None
    K = nullspace(m, ncol) if m else nullspace([], ncol)
    if not K:
        return x0, sum((abs(v) for v in x0), Fraction(0))
    q = len(K)
    # variables: y (free), u_i >= |x_i|
    A_ub, b_ub = [], []
    for i in range(ncol):
        row = [K[j][i] for j in range(q)]
        unit = [Fraction(int(i == j)) for j in range(ncol)]
        A_ub.append(row + [-u for u in unit])
        b_ub.append(-x0[i])
        A_ub.append([-v for v in row] + [-u for u in unit])
        b_ub.append(x0[i])
    res = linprog([0] * q + [1] * ncol, A_ub, b_ub, free=range(q))
    if res.status != "optimal":
        raise RuntimeError(f"inner LP ended with status {res.status}")
    y = res.x[:q]
    x = [x0[i] + sum(K[j][i] * y[j] for j in range(q)) for i in range(ncol)]
    return x, sum((abs(v) for v in x), Fraction(0))


def min_linf_primitive(pair: SimplicialPair, k: int, w: Cochain) -> Tuple[Cochain, Fraction]:
    """a in C^{k-1}(X, A) of least sup norm with da = w."""
    if w.k != k:
        raise ValueError(f"expected a {k}-cochain")
    _relative(pair, w, NotACoboundary)
    target = w.vector(pair)
    if not any(target):
        return Cochain(k - 1), Fraction(0)
    m = pair.coboundary_matrix(k)
    if not pair.cells(k - 1):
        raise NotACoboundary("no (k-1)-cells to draw a primitive from")
    out = _min_linf(m, target)
    if out is None:
        raise NotACoboundary("w is not a relative coboundary")
    x, norm = out
    return Cochain.from_vector(pair, k - 1, x), norm


def min_mass_filling(pair: SimplicialPair, k: int, T: Chain) -> Tuple[Chain, Fraction]:
    """S in C_k(X, A) of least mass with boundary T (a (k-1)-chain)."""
    if T.k != k - 1:
        raise ValueError(f"expected a {k - 1}-chain")
    _relative(pair, T, NotABoundary)
    target = T.vector(pair)
    if not any(target):
        return Chain(k), Fraction(0)
    if not pair.cells(k):
        raise NotABoundary("no k-cells to fill with")
    out = _min_l1(pair.boundary_matrix(k), target)
    if out is None:
        raise NotABoundary("T is not a relative boundary")
    x, mass = out
    return Chain.from_vector(pair, k, x), mass


# ------------------------------------------------------------ isoperimetry

@dataclass
class IsoperimetricResult:
    side: str
    k: int
    constant: Fraction
    extremal: Optional[object] = None   # the w or T attaining the constant
    optimum: Optional[object] = None    # its optimal primitive or filling
    vertices: int = 0

    def verify(self, pair: SimplicialPair) -> bool:
        if self.extremal is None:
            return self.constant == 0
        if self.side == "forms":
            ok = coboundary(pair, self.optimum).values == {s: v for s, v in self.extremal.values.items() if v}
            return ok and self.optimum.norm() == self.constant * self.extremal.norm()
        ok = boundary(pair, self.optimum).values == {s: v for s, v in self.extremal.values.items() if v}
        return ok and self.optimum.mass() == self.constant * self.extremal.mass()


def _check_size(pair: SimplicialPair, k: int, cap: int):
    n = max(len(pair.cells(k)), len(pair.cells(k - 1)))
    if n > cap:
        raise TooLarge(f"{n} simplices in the active dimensions exceeds the cap of {cap}")


def _linf_vertices(B: List[List[Fraction]]) -> List[List[Fraction]]:
    """Vertices of {Bz : |Bz|_inf <= 1}, one representative per sign pair."""
    m = len(B)
    r = len(B[0]) if B else 0
    seen = set()
    out = []
    for rows in itertools.combinations(range(m), r):
        sub = [B[i] for i in rows]
        if rank(sub) < r:
            continue
        # M = B sub^{-1}: solve sub^T X^T = B^T row by row
        inv_cols = []
        for j in range(r):
            e = [Fraction(int(i == j)) for i in range(r)]
            inv_cols.append(solve(sub, e))
        M = [[sum(B[i][p] * inv_cols[j][p] for p in range(r)) for j in range(r)] for i in range(m)]
        for tail in itertools.product((1, -1), repeat=r - 1):
            s = (1,) + tail
            w = [sum(M[i][j] * s[j] for j in range(r)) for i in range(m)]
            if max(abs(v) for v in w) > 1:
                continue
            first = next(v for v in w if v)
            key = tuple(w) if first > 0 else tuple(-v for v in w)
            if key not in seen:
                seen.add(key)
                out.append(list(key))
    return out


def _l1_vertices(B: List[List[Fraction]]) -> List[List[Fraction]]:
    """Normalised circuits of the column space of B: vertices of its unit l1 ball."""
    m = len(B)
    r = len(B[0]) if B else 0
    seen = set()
    out = []
    for zeros in itertools.combinations(range(m), r - 1):
        sub = [B[i] for i in zeros]
        K = nullspace(sub, r) if sub else nullspace([], r)
        if len(K) != 1:
            continue
        u = [sum(B[i][j] * K[0][j] for j in range(r)) for i in range(m)]
        norm = sum(abs(v) for v in u)
        if not norm:
            continue
        u = [v / norm for v in u]
        first = next(v for v in u if v)
        key = tuple(u) if first > 0 else tuple(-v for v in u)
        if key not in seen:
            seen.add(key)
            out.append(list(key))
    return out


def iso_constant(pair: SimplicialPair, k: int, side: str = "forms", cap: int = DEFAULT_CAP) -> IsoperimetricResult:
    """Least C with min-primitive <= C |w|_inf (forms) or min-filling <= C mass (chains)."""
    if side not in ("forms", "chains"):
        raise ValueError("side must be 'forms' or 'chains'")
    _check_size(pair, k, cap)
    if side == "forms":
        m = pair.coboundary_matrix(k)
        B = column_basis(m) if m and pair.cells(k - 1) else []
        if not B or not B[0]:
            return IsoperimetricResult(side, k, Fraction(0))
        best = IsoperimetricResult(side, k, Fraction(-1))
        verts = _linf_vertices(B)
        for w in verts:
            x, val = _min_linf(m, w)
            if val > best.constant:
                best = IsoperimetricResult(side, k, val, Cochain.from_vector(pair, k, w),
                                           Cochain.from_vector(pair, k - 1, x))
        best.vertices = len(verts)
        return best
    m = pair.boundary_matrix(k)
    B = column_basis(m) if m and pair.cells(k) else []
    if not B or not B[0]:
        return IsoperimetricResult(side, k, Fraction(0))
    best = IsoperimetricResult(side, k, Fraction(-1))
    verts = _l1_vertices(B)
    for u in verts:
        x, val = _min_l1(m, u)
        if val > best.constant:
            best = IsoperimetricResult(side, k, val, Chain.from_vector(pair, k - 1, u),
                                       Chain.from_vector(pair, k, x))
    best.vertices = len(verts)
    return best


def duality_check(pair: SimplicialPair, k: int, cap: int = DEFAULT_CAP) -> Tuple[Fraction, Fraction, bool]:
    c1 = iso_constant(pair, k, "forms", cap).constant
    c2 = iso_constant(pair, k, "chains", cap).constant
    return c1, c2, c1 == c2


# ---------------------------------------------------------------- rounding

def nearest_integer(x: Fraction) -> int:
    """floor(x + 1/2): halves round up."""
    return math.floor(Fraction(x) + Fraction(1, 2))


def integer_solution(m: List[List[Fraction]], b: List[Fraction]) -> Optional[List[int]]:
    """An integer x with m x = b (m, b integral), via the Smith normal form."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_decomp
    if any(Fraction(v).denominator != 1 for v in b):
        return None
    rows, cols = len(m), (len(m[0]) if m else 0)
    if cols == 0:
        return [] if not any(b) else None
    M = Matrix(rows, cols, [int(v) for row in m for v in row])
    S, U, V = smith_normal_decomp(M, domain=ZZ)
    Ub = U * Matrix(rows, 1, [int(v) for v in b])
    y = [0] * cols
    for i in range(rows):
        d = S[i, i] if i < cols else 0
        if d == 0:
            if Ub[i] != 0:
                return None
        else:
            if Ub[i] % d:
                return None
            y[i] = int(Ub[i] // d)
    x = V * Matrix(cols, 1, y)
    return [int(v) for v in x]


@dataclass
class GuthResult:
    b: Cochain
    rounded: Cochain
    remainder: Cochain
    bounds: Dict[Simplex, Fraction]
    integral_fallback: bool = False

    def within_bounds(self) -> bool:
        return all(abs(v) <= self.bounds[s] for s, v in self.remainder.values.items())


def guth_round(pair: SimplicialPair, n: int, c: Cochain, w: Cochain) -> GuthResult:
    """Round a primitive of w - c to integers and report the remainder.

    b has least sup norm among primitives of w - c; [b] is its entrywise
    nearest integer and r = w - c - d[b]. Each n-cell carries the bound
    (number of its faces) / 2. When w - c has an integral primitive and the
    rounded one leaves a remainder, the integral primitive is used instead.
    """
    if c.k != n or w.k != n:
        raise ValueError(f"expected {n}-cochains")
    if any(Fraction(v).denominator != 1 for v in c.values.values()):
        raise ValueError("c must be integral")
    diff = {s: Fraction(w.values.get(s, 0)) - Fraction(c.values.get(s, 0))
            for s in set(w.values) | set(c.values)}
    for s, v in diff.items():
        if v and s in pair.A:
            raise NotACoboundary(f"w and c disagree on {s}, which lies in A")
    for x in (c, w):
        if n + 1 in pair.simplices:
            rel = Cochain(n, {s: v for s, v in x.values.items() if s not in pair.A})
            if coboundary(pair, rel).values:
                raise NotACoboundary("c and w must be relative cocycles")
    target = Cochain(n, {s: v for s, v in diff.items() if v and s not in pair.A})
    b, _ = min_linf_primitive(pair, n, target)
    rounded = Cochain(n - 1, {s: Fraction(nearest_integer(v)) for s, v in b.values.items()
                              if nearest_integer(v)})
    rem_vec = [t - d for t, d in zip(target.vector(pair), coboundary(pair, rounded).vector(pair))]
    fallback = False
    if any(rem_vec) and all(v.denominator == 1 for v in target.vector(pair)):
        x = integer_solution(pair.coboundary_matrix(n), target.vector(pair))
        if x is not None:
            b = rounded = Cochain.from_vector(pair, n - 1, x)
            rem_vec = [Fraction(0)] * len(rem_vec)
            fallback = True
    remainder = Cochain.from_vector(pair, n, rem_vec)
    bounds = {s: Fraction(len(faces(s)), 2) for s in pair.cells(n)}
    return GuthResult(b, rounded, remainder, bounds, fallback)


# ------------------------------------------------------------ sample spaces

def path_graph(n: int) -> SimplicialPair:
    return SimplicialPair([(i, i + 1) for i in range(n - 1)], name=f"path{n}")


def cycle_graph(n: int) -> SimplicialPair:
    return SimplicialPair([(i, (i + 1) % n) for i in range(n)], name=f"cycle{n}")


def cone(base: Iterable[Sequence[int]], apex: Optional[int] = None) -> SimplicialPair:
    base = [tuple(s) for s in base]
    if apex is None:
        apex = max(v for s in base for v in s) + 1
    return SimplicialPair([s + (apex,) for s in base], name="cone")


def fan_disk(n: int, boundary_relative: bool = False) -> SimplicialPair:
    """Disk triangulated as a fan of n triangles around vertex 0."""
    tris = [(0, i, i % n + 1) for i in range(1, n + 1)]
    rel = [(i, i % n + 1) for i in range(1, n + 1)] if boundary_relative else []
    return SimplicialPair(tris, rel, name=f"disk{n}")


def prism_complex(base: Iterable[Sequence[int]], relative_ends: bool = True) -> SimplicialPair:
    """base x [0, 1] with the staircase triangulation; vertex v lifts to v and v + N."""
    base = [tuple(sorted(s)) for s in base]
    N = max(v for s in base for v in s) + 1
    tops = []
    for s in base:
        for i in range(len(s)):
            tops.append(tuple(s[: i + 1]) + tuple(v + N for v in s[i:]))
    rel = []
    if relative_ends:
        rel = list(base) + [tuple(v + N for v in s) for s in base]
    return SimplicialPair(tops, rel, name="prism")


def sphere_prism() -> SimplicialPair:
    """Boundary of the tetrahedron times an interval, ends relative."""
    return prism_complex(list(itertools.combinations(range(4), 3)))


def random_pair(rng: random.Random, cap: int = DEFAULT_CAP, k: int = 1) -> SimplicialPair:
    """A small random 2-complex with a random subcomplex, within the cap for dimension k."""
    while True:
        nv = rng.randint(3, 6)
        edges = [e for e in itertools.combinations(range(nv), 2) if rng.random() < 0.6]
        tris = [t for t in itertools.combinations(range(nv), 3)
                if rng.random() < 0.3 and all(e in edges for e in itertools.combinations(t, 2))]
        simp = edges + tris + [(v,) for v in range(nv)]
        rel = []
        if rng.random() < 0.4:
            rel = [(v,) for v in range(nv) if rng.random() < 0.3]
            if edges and rng.random() < 0.5:
                rel.append(rng.choice(edges))
        try:
            pair = SimplicialPair(simp, rel, name="random")
        except ValueError:
            continue
        if max(len(pair.cells(k)), len(pair.cells(k - 1))) <= cap and pair.cells(k):
            return pair
