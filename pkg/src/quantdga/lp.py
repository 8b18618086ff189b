"""Exact rational linear programming: two-phase tableau simplex with Bland's rule."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

F0 = Fraction(0)


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible", "unbounded"
    x: List[Fraction] = field(default_factory=list)
    fun: Optional[Fraction] = None


def _pivot(tab: List[List[Fraction]], r: int, c: int) -> None:
    row = tab[r]
    inv = 1 / row[c]
    if inv != 1:
        row = [v * inv for v in row]
        tab[r] = row
    nz = [(j, v) for j, v in enumerate(row) if v]
    for i, other in enumerate(tab):
        if i == r:
            continue
        f = other[c]
        if f:
            for j, v in nz:
                other[j] -= f * v


def _simplex(tab, basis, cost_row: int, allowed: int) -> str:
    """Minimise; tab[cost_row] holds reduced costs with -objective in the last column."""
    m = len(basis)
    while True:
        cost = tab[cost_row]
        enter = next((j for j in range(allowed) if cost[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        leave = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded"
        _pivot(tab, leave, enter)
        basis[leave] = enter


def linprog(c: Sequence, A_ub=None, b_ub=None, A_eq=None, b_eq=None,
            free: Sequence[int] = ()) -> LPResult:
    """min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0 except indices in ``free``."""
    c = [Fraction(v) for v in c]
    n = len(c)
    free = sorted(set(free))
    # split free variables x = x+ - x-
    col_map = list(range(n)) + free
    sign_map = [1] * n + [-1] * len(free)
    ncol = len(col_map)

    def expand(row):
        return [Fraction(row[col_map[j]]) * sign_map[j] for j in range(ncol)]

    rows, rhs, slack_sign = [], [], []
    for r, b in zip(A_ub or [], b_ub or []):
        rows.append(expand(r))
        rhs.append(Fraction(b))
        slack_sign.append(1)
    for r, b in zip(A_eq or [], b_eq or []):
        rows.append(expand(r))
        rhs.append(Fraction(b))
        slack_sign.append(0)
    m = len(rows)
    n_slack = sum(1 for s in slack_sign if s)
    width = ncol + n_slack + m + 1
    tab: List[List[Fraction]] = []
    basis: List[int] = []
    k = 0
    for i in range(m):
        row = [F0] * width
        row[:ncol] = rows[i]
        if slack_sign[i]:
            row[ncol + k] = Fraction(1)
            k += 1
        row[-1] = rhs[i]
        if row[-1] < 0:
            row = [-v for v in row]
        row[ncol + n_slack + i] = Fraction(1)
        tab.append(row)
        basis.append(ncol + n_slack + i)
    n_real = ncol + n_slack
    # phase 1 objective: sum of artificials
    p1 = [F0] * width
    for i in range(m):
        for j in range(width):
            if j < n_real or j == width - 1:
                p1[j] -= tab[i][j]
    tab.append(p1)
    status = _simplex(tab, basis, m, n_real)
    if tab[m][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis
    for i in range(m):
        if basis[i] >= n_real:
            col = next((j for j in range(n_real) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, i, col)
                basis[i] = col
    keep = [i for i in range(m) if basis[i] < n_real]
    tab = [tab[i][:n_real] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(tab)
    cost = [F0] * (n_real + 1)
    for j in range(ncol):
        cost[j] = c[col_map[j]] * sign_map[j]
    for i in range(m):
        cb = cost[basis[i]]
        if cb:
            cost = [a - cb * b for a, b in zip(cost, tab[i])]
    tab.append(cost)
    status = _simplex(tab, basis, m, n_real)
    if status == "unbounded":
        return LPResult("unbounded")
    xs = [F0] * n_real
    for i in range(m):
        xs[basis[i]] = tab[i][-1]
    x = [F0] * n
    for j in range(ncol):
        x[col_map[j]] += sign_map[j] * xs[j]
    fun = sum((ci * xi for ci, xi in zip(c, x)), F0)
    return LPResult("optimal", x, fun)
