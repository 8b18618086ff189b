"""Exact linear algebra over the rationals.

Two flavours live here. ``Echelon`` is an incremental sparse eliminator on
dict-vectors that remembers how each stored row was built from the inputs; the
algebra code uses it for kernels, images and preimages of the differential.
The dense helpers (``rref``, ``nullspace``, ``solve``) serve the small
matrices of the cochain module and the LP solver.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

Vector = Dict[int, Fraction]


def _axpy(y: dict, a: Fraction, x: dict) -> None:
    """y += a*x in place, dropping zeros."""
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


class Echelon:
    """Row echelon form built one vector at a time.

    Every stored row has a pivot equal to its smallest key and coefficient 1
    there; pivots are distinct. Each row carries a combination of input tags
    reproducing it, so residuals of ``reduce`` can be written as
    ``vec - sum(coef * input[tag])``.
    """

    def __init__(self):
        self.rows: Dict[int, Vector] = {}
        self.combos: Dict[int, Dict[Hashable, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vector) -> Tuple[Vector, Dict[Hashable, Fraction]]:
        v = dict(vec)
        combo: Dict[Hashable, Fraction] = {}
        heap = [k for k in v if k in self.rows]
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            p = heapq.heappop(heap)
            seen.discard(p)
            a = v.get(p)
            if not a:
                continue
            row = self.rows[p]
            for k in row:
                if k not in v and k in self.rows and k not in seen:
                    heapq.heappush(heap, k)
                    seen.add(k)
            _axpy(v, -a, row)
            _axpy(combo, a, self.combos[p])
        return v, combo

    def add(self, vec: Vector, tag: Hashable) -> Optional[Dict[Hashable, Fraction]]:
        """Insert ``vec``; return a kernel relation if it was dependent.

        The relation maps tags to coefficients with ``sum coef*input = 0``.
        """
        res, combo = self.reduce(vec)
        if not res:
            rel = {t: -c for t, c in combo.items()}
            rel[tag] = rel.get(tag, 0) + 1
            return {t: c for t, c in rel.items() if c}
        p = min(res)
        inv = 1 / res[p]
        row = {k: c * inv for k, c in res.items()}
        comb = {t: -c * inv for t, c in combo.items()}
        comb[tag] = comb.get(tag, 0) + inv
        self.rows[p] = row
        self.combos[p] = {t: c for t, c in comb.items() if c}
        return None

    def express(self, vec: Vector) -> Optional[Dict[Hashable, Fraction]]:
        """Coefficients writing ``vec`` in the span of the inputs, or None."""
        res, combo = self.reduce(vec)
        if res:
            return None
        return combo


# dense helpers ------------------------------------------------------------

Matrix = List[List[Fraction]]


def to_fractions(m: Iterable[Iterable]) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def rref(m: Sequence[Sequence[Fraction]]) -> Tuple[Matrix, List[int]]:
    a = [list(map(Fraction, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                ai, ar = a[i], a[r]
                a[i] = [x - f * y for x, y in zip(ai, ar)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> Matrix:
    """Basis of {x : m x = 0}, one vector per free column (free entry 1)."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(m[0])
    r, piv = rref(m)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -r[i][f]
        basis.append(x)
    return basis


def solve(m: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Particular solution of m x = b with free variables zero, or None."""
    if not m:
        return [] if all(x == 0 for x in b) else None
    n = len(m[0])
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(m, b)]
    r, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = r[i][n]
    return x


def matvec(m: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> List[Fraction]:
    return [sum((a * b for a, b in zip(row, x) if a and b), Fraction(0)) for row in m]


def transpose(m: Sequence[Sequence[Fraction]], ncols: int = 0) -> Matrix:
    if not m:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*m)]


def column_basis(m: Sequence[Sequence[Fraction]]) -> Matrix:
    """Columns (as a row-major matrix) spanning the column space of ``m``."""
    if not m or not m[0]:
        return [[] for _ in m]
    _, piv = rref(m)
    return [[row[p] for p in piv] for row in m]
