"""Numerics for the nullhomotopy recurrence with rho(L) = exp(kappa sqrt(log L)).

Everything here is double precision; it is the only inexact part of the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple


def rho(L: float, kappa: float) -> float:
    return math.exp(kappa * math.sqrt(math.log(L))) if L > 1 else 1.0


def crossing_point(kappa: float) -> float:
    """The L > 1 with rho(L) = L, namely exp(kappa^2)."""
    return math.exp(kappa * kappa)


def proof_kappa(C: float, Cprime: float) -> float:
    """kappa = sqrt(2 log(2 C C'))."""
    return math.sqrt(2 * math.log(2 * C * Cprime))


def format_sci(x: float, digits: int = 3) -> str:
    """Scientific notation with a bare exponent, e.g. 7.20e10."""
    mant, exp = f"{x:.{digits - 1}e}".split("e")
    return f"{mant}e{int(exp)}"


@dataclass
class RecurrenceTable:
    C: float
    Cprime: float
    n: int
    kappa: float
    A: float
    crossing: float
    rows: List[Tuple[float, float, float]] = field(default_factory=list)  # (L, gamma bound, ratio)

    def ratios(self) -> List[float]:
        return [r for _, _, r in self.rows]

    def non_increasing(self, rel_tol: float = 1e-12) -> bool:
        rs = self.ratios()
        return all(b <= a * (1 + rel_tol) for a, b in zip(rs, rs[1:]))


def weird_recurrence(C: float, Cprime: float, n: int, kappa: float, Lmax: float,
                     Lmin: float = 1e4, per_decade: int = 4,
                     A: Optional[float] = None) -> RecurrenceTable:
    """Iterate gamma(L) <= 2C max{C'^(2n/(2n-1)) L rho(L), C' rho(L) gamma(L/rho(L))}.

    The iteration tracks r(L) = gamma(L) / (L rho(L)); below the crossing
    (where rho(L) >= L) the base value r = A is used, A defaulting to the
    smallest constant the induction allows, 2C C'^(2n/(2n-1)).
    """
    if C < 1 or Cprime < 1:
        raise ValueError("C and C' must be at least 1")
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    expo = 2 * n / (2 * n - 1)
    floor_const = 2 * C * Cprime ** expo
    A = floor_const if A is None else max(A, floor_const)
    k2 = kappa * kappa

    @lru_cache(maxsize=None)
    def ratio(logL: float) -> float:
        if logL <= k2:
            return A
        s = math.sqrt(logL)
        log_next = logL - kappa * s
        # rho(L/rho)/rho(L) in log form
        shrink = kappa * (math.sqrt(max(log_next, 0.0)) - s)
        return max(floor_const, 2 * C * Cprime * ratio(log_next) * math.exp(shrink))

    table = RecurrenceTable(C, Cprime, n, kappa, A, crossing_point(kappa))
    if Lmax < Lmin:
        return table
    lo, hi = math.log10(Lmin), math.log10(Lmax)
    steps = max(1, int(round((hi - lo) * per_decade)))
    for i in range(steps + 1):
        L = 10 ** (lo + (hi - lo) * i / steps)
        r = ratio(math.log(L))
        table.rows.append((L, r * L * rho(L, kappa), r))
    return table
