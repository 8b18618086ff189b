"""Polynomial forms on an interval (and a square) with coefficients in a free CDGA.

A cylinder element is a finite sum of terms ``a (x) t^i`` and ``a (x) t^i dt``,
stored as a map ``(i, j) -> a`` with ``j`` the dt flag. Signs follow
``d(a t^i) = da t^i + (-1)^|a| i a t^(i-1) dt`` and ``d(a t^i dt) = da t^i dt``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple, Union

from .algebra import Element, FreeCDGA
from .errors import AlgebraMismatch, DegreeCapExceeded, DegreeMismatch

T_POWER_CAP = 64

Key = Tuple[int, int]


def _add_into(out: dict, key, val: Element) -> None:
    cur = out.get(key)
    new = val if cur is None else cur + val
    if new:
        out[key] = new
    else:
        out.pop(key, None)


def _common_alg(elems):
    alg = None
    for e in elems:
        if alg is None or e.alg is alg:
            alg = e.alg
        elif e.alg.contains(alg):
            alg = e.alg
        elif not alg.contains(e.alg):
            raise AlgebraMismatch(f"{alg.describe()} vs {e.alg.describe()}")
    return alg


class CylinderElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeCDGA, terms: Dict[Key, Element]):
        self.alg = alg
        clean = {}
        for k, v in terms.items():
            if k[0] > T_POWER_CAP:
                raise DegreeCapExceeded(f"t-power {k[0]} exceeds cap {T_POWER_CAP}")
            v = alg.embed(v)
            if v:
                clean[k] = v
        self.terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, a: Element) -> "CylinderElement":
        return cls(a.alg, {(0, 0): a})

    @classmethod
    def tensor(cls, a: Element, power: int = 0, dt: int = 0) -> "CylinderElement":
        return cls(a.alg, {(power, dt): a})

    @classmethod
    def zero(cls, alg: FreeCDGA) -> "CylinderElement":
        return cls(alg, {})

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "CylinderElement":
        if isinstance(other, CylinderElement):
            return other
        if isinstance(other, Element):
            return CylinderElement.const(other)
        if isinstance(other, (int, Fraction)):
            return CylinderElement.const(self.alg.scalar(other))
        raise TypeError(f"cannot combine CylinderElement with {type(other).__name__}")

    def _pair(self, other):
        other = self._coerce(other)
        alg = _common_alg([self.alg.zero(), other.alg.zero()])
        return alg, other

    def __add__(self, other):
        alg, other = self._pair(other)
        out = {k: alg.embed(v) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            _add_into(out, k, alg.embed(v))
        return CylinderElement(alg, out)

    __radd__ = __add__

    def __neg__(self):
        return CylinderElement(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CylinderElement":
        return CylinderElement(self.alg, {k: v.scale(c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        alg, other = self._pair(other)
        out: Dict[Key, Element] = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                if j + l > 1:
                    continue
                bb = b.parity_twist() if j else b
                _add_into(out, (i + k, j + l), alg.embed(a) * alg.embed(bb))
        return CylinderElement(alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Element):
            return CylinderElement.const(other) * self
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (Element, int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, CylinderElement):
            return NotImplemented
        try:
            diff = self - other
        except AlgebraMismatch:
            return False
        return not diff.terms

    def __bool__(self):
        return bool(self.terms)

    __hash__ = None  # type: ignore[assignment]

    # calculus -----------------------------------------------------------
    def d(self) -> "CylinderElement":
        out: Dict[Key, Element] = {}
        for (i, j), a in self.terms.items():
            _add_into(out, (i, j), a.d())
            if j == 0 and i > 0:
                _add_into(out, (i - 1, 1), a.parity_twist().scale(i))
        return CylinderElement(self.alg, out)

    def at(self, eps) -> Element:
        """Restrict to t = eps, dt = 0."""
        eps = Fraction(eps)
        out = self.alg.zero()
        for (i, j), a in self.terms.items():
            if j == 0:
                out = out + a.scale(eps ** i)
        return out

    def integrate_0_t(self) -> "CylinderElement":
        out: Dict[Key, Element] = {}
        for (i, j), a in self.terms.items():
            if j == 1:
                _add_into(out, (i + 1, 0), a.parity_twist().scale(Fraction(1, i + 1)))
        return CylinderElement(self.alg, out)

    def integrate_0_1(self) -> Element:
        out = self.alg.zero()
        for (i, j), a in self.terms.items():
            if j == 1:
                out = out + a.parity_twist().scale(Fraction(1, i + 1))
        return out

    def reverse(self) -> "CylinderElement":
        """Pull back along t -> 1 - t."""
        one_minus_t = CylinderElement(self.alg, {(0, 0): self.alg.one(), (1, 0): -self.alg.one()})
        minus_dt = CylinderElement(self.alg, {(0, 1): -self.alg.one()})
        out = CylinderElement.zero(self.alg)
        for (i, j), a in self.terms.items():
            piece = CylinderElement.const(a)
            for _ in range(i):
                piece = piece * one_minus_t
            if j:
                piece = piece * minus_dt
            out = out + piece
        return out

    def t_part(self) -> Dict[int, Element]:
        return {i: a for (i, j), a in self.terms.items() if j == 0}

    def dt_part(self) -> Dict[int, Element]:
        return {i: a for (i, j), a in self.terms.items() if j == 1}

    def degree(self) -> int:
        degs = set()
        for (i, j), a in self.terms.items():
            degs.update(x + j for x in a.degrees())
        if len(degs) != 1:
            raise DegreeMismatch(f"cylinder element has degrees {sorted(degs)}")
        return degs.pop()

    def max_t_power(self) -> int:
        return max((i + j for (i, j) in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), a in self.sorted_terms():
            factor = {0: "", 1: "t"}.get(i, f"t^{i}")
            if j:
                factor = (factor + " dt").strip() if factor else "dt"
            inner = str(a)
            parts.append(f"({inner})" + (f" (x) {factor}" if factor else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"CylinderElement({self})"


SKey = Tuple[int, int, int, int]  # t power, s power, dt flag, ds flag


class SquareElement:
    """Forms on the square: coefficients times t^i s^k dt^j ds^l (dt written first)."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeCDGA, terms: Dict[SKey, Element]):
        self.alg = alg
        clean = {}
        for k, v in terms.items():
            if k[0] > T_POWER_CAP or k[1] > T_POWER_CAP:
                raise DegreeCapExceeded("polynomial degree exceeds cap")
            v = alg.embed(v)
            if v:
                clean[k] = v
        self.terms = clean

    @classmethod
    def zero(cls, alg: FreeCDGA) -> "SquareElement":
        return cls(alg, {})

    @classmethod
    def from_t(cls, u: CylinderElement) -> "SquareElement":
        return cls(u.alg, {(i, 0, j, 0): a for (i, j), a in u.terms.items()})

    @classmethod
    def from_s(cls, u: CylinderElement) -> "SquareElement":
        return cls(u.alg, {(0, i, 0, j): a for (i, j), a in u.terms.items()})

    def _coerce(self, other) -> "SquareElement":
        if isinstance(other, SquareElement):
            return other
        if isinstance(other, Element):
            return SquareElement(other.alg, {(0, 0, 0, 0): other})
        if isinstance(other, (int, Fraction)):
            return SquareElement(self.alg, {(0, 0, 0, 0): self.alg.scalar(other)})
        raise TypeError(f"cannot combine SquareElement with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        alg = _common_alg([self.alg.zero(), other.alg.zero()])
        out = {k: alg.embed(v) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            _add_into(out, k, alg.embed(v))
        return SquareElement(alg, out)

    __radd__ = __add__

    def __neg__(self):
        return SquareElement(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def scale(self, c) -> "SquareElement":
        return SquareElement(self.alg, {k: v.scale(c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        alg = _common_alg([self.alg.zero(), other.alg.zero()])
        out: Dict[SKey, Element] = {}
        for (i, k, j, l), a in self.terms.items():
            for (p, q, m, n), b in other.terms.items():
                if j + m > 1 or l + n > 1:
                    continue
                bb = b.parity_twist() if (j + l) % 2 else b
                prod = alg.embed(a) * alg.embed(bb)
                if l and m:
                    prod = -prod
                _add_into(out, (i + p, k + q, j + m, l + n), prod)
        return SquareElement(alg, out)

    def __eq__(self, other):
        if not isinstance(other, SquareElement):
            other = self._coerce(other)
        return not (self - other).terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self):
        return bool(self.terms)

    def d(self) -> "SquareElement":
        out: Dict[SKey, Element] = {}
        for (i, k, j, l), a in self.terms.items():
            _add_into(out, (i, k, j, l), a.d())
            tw = a.parity_twist()
            if i > 0 and j == 0:
                _add_into(out, (i - 1, k, 1, l), tw.scale(i))
            if k > 0 and l == 0:
                _add_into(out, (i, k - 1, j, 1), tw.scale(k * (-1) ** j))
        return SquareElement(self.alg, out)

    def integrate_0_s(self) -> "SquareElement":
        out: Dict[SKey, Element] = {}
        for (i, k, j, l), a in self.terms.items():
            if l == 1:
                c = Fraction(1, k + 1) * (-1) ** j
                _add_into(out, (i, k + 1, j, 0), a.parity_twist().scale(c))
        return SquareElement(self.alg, out)

    def restrict_t(self, eps) -> "SquareElement":
        eps = Fraction(eps)
        out: Dict[SKey, Element] = {}
        for (i, k, j, l), a in self.terms.items():
            if j == 0:
                _add_into(out, (0, k, 0, l), a.scale(eps ** i))
        return SquareElement(self.alg, out)

    def restrict_s(self, eps) -> "SquareElement":
        eps = Fraction(eps)
        out: Dict[SKey, Element] = {}
        for (i, k, j, l), a in self.terms.items():
            if l == 0:
                _add_into(out, (i, 0, j, 0), a.scale(eps ** k))
        return SquareElement(self.alg, out)

    def at(self, t, s) -> Element:
        out = self.alg.zero()
        for (i, k, j, l), a in self.terms.items():
            if j == 0 and l == 0:
                out = out + a.scale(Fraction(t) ** i * Fraction(s) ** k)
        return out

    def diagonal(self) -> CylinderElement:
        out: Dict[Key, Element] = {}
        for (i, k, j, l), a in self.terms.items():
            if j + l > 1:
                continue
            _add_into(out, (i + k, j + l), a)
        return CylinderElement(self.alg, out)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        return "SquareElement(" + " + ".join(f"({a})*{k}" for k, a in self.sorted_terms()) + ")"


# operation-style entry points ---------------------------------------------

def cyl_differentiate(u: CylinderElement) -> CylinderElement:
    return u.d()


def integrate_0_t(u: CylinderElement) -> CylinderElement:
    return u.integrate_0_t()


def integrate_0_1(u: CylinderElement) -> Element:
    return u.integrate_0_1()


def square_integrate_0_s(u: SquareElement) -> SquareElement:
    return u.integrate_0_s()


def diagonal_restrict(u: SquareElement) -> CylinderElement:
    return u.diagonal()


def t_poly(alg: FreeCDGA, coeffs: Dict[int, Union[int, Fraction]]) -> CylinderElement:
    """The scalar polynomial sum c_i t^i as a cylinder element."""
    return CylinderElement(alg, {(i, 0): alg.scalar(c) for i, c in coeffs.items()})


def dt(alg: FreeCDGA) -> CylinderElement:
    return CylinderElement(alg, {(0, 1): alg.one()})


def t(alg: FreeCDGA) -> CylinderElement:
    return CylinderElement(alg, {(1, 0): alg.one()})
