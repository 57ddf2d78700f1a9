"""Genus-2 curves y^2 = f(x), their points, divisors and canonical pencil."""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import NamedTuple

from ..algebra import poly
from ..algebra.fields import Field


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class CrvPoint:
    """An affine point ``(x, y)`` or a point at infinity (``branch`` 0 or 1)."""

    x: object = None
    y: object = None
    branch: int | None = None

    @classmethod
    def inf(cls, branch=0):
        return cls(None, None, branch)

    @property
    def is_infinite(self):
        return self.branch is not None

    @property
    def sort_key(self):
        if self.branch is not None:
            return (1, self.branch, 0)
        return (0, self.x, self.y)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def fmt(self, F):
        if self.branch is not None:
            return f"inf{self.branch}"
        return f"({F.fmt(self.x)},{F.fmt(self.y)})"


class Divisor:
    """Finite formal sum of curve points with nonzero integer multiplicities."""

    __slots__ = ("_items", "_map")

    def __init__(self, coeffs=None):
        m = {}
        for pt, k in dict(coeffs or {}).items():
            if k:
                m[pt] = m.get(pt, 0) + k
        m = {pt: k for pt, k in m.items() if k}
        self._map = m
        self._items = tuple(sorted(m.items(), key=lambda it: it[0].sort_key))

    @classmethod
    def point(cls, pt, k=1):
        return cls({pt: k})

    @classmethod
    def from_points(cls, pts):
        m = {}
        for pt in pts:
            m[pt] = m.get(pt, 0) + 1
        return cls(m)

    def items(self):
        return self._items

    @property
    def support(self):
        return [pt for pt, _ in self._items]

    def __getitem__(self, pt):
        return self._map.get(pt, 0)

    @property
    def degree(self):
        return sum(self._map.values())

    @property
    def is_effective(self):
        return all(k > 0 for k in self._map.values())

    @property
    def is_reduced(self):
        return all(k == 1 for k in self._map.values())

    def positive(self):
        return Divisor({p: k for p, k in self._map.items() if k > 0})

    def negative(self):
        return Divisor({p: -k for p, k in self._map.items() if k < 0})

    def __add__(self, other):
        m = dict(self._map)
        for p, k in other._map.items():
            m[p] = m.get(p, 0) + k
        return Divisor(m)

    def __neg__(self):
        return Divisor({p: -k for p, k in self._map.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        return Divisor({p: n * k for p, k in self._map.items()})

    def __ge__(self, other):
        return (self - other).is_effective or not (self - other)._map

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __bool__(self):
        return bool(self._map)

    def __repr__(self):
        return f"Divisor({dict(self._items)!r})"

    def fmt(self, F):
        return "[" + ", ".join(f"{p.fmt(F)}:{k}" for p, k in self._items) + "]"


class Fiber(NamedTuple):
    """Fibre of the hyperelliptic map x over ``t`` (None for infinity).

    ``divisor`` lives on the ground curve when ``rational`` and on the
    quadratic extension otherwise.
    """

    t: object
    divisor: Divisor
    rational: bool


class HyperCurve:
    """Smooth genus-2 curve y^2 = f(x) with deg f in {5, 6}."""

    genus = 2

    def __init__(self, f, field: Field):
        F = field
        f = poly.strip(f, F)
        if poly.deg(f) not in (5, 6):
            raise CurveError(f"deg f must be 5 or 6, got {poly.deg(f)}")
        if F.characteristic and F.characteristic <= 7:
            raise CurveError("characteristic too small")
        if not poly.is_squarefree(f, F):
            raise CurveError("f is not squarefree: the model is singular")
        self.f = tuple(f)
        self.field = F
        self.degree = poly.deg(f)
        self.inf_sqrt = None
        if self.degree == 6:
            s = F.sqrt(f[-1])
            if s is None:
                raise CurveError("degree-6 model needs a square leading coefficient")
            self.inf_sqrt = s
        self.df = tuple(poly.deriv(f, F))

    def __repr__(self):
        return f"HyperCurve(y^2 = {poly.fmt(list(self.f), self.field)} over {self.field.tag})"

    def __eq__(self, other):
        return isinstance(other, HyperCurve) and (self.f, self.field) == (other.f, other.field)

    def __hash__(self):
        return hash((self.f, self.field))

    @property
    def infinity_points(self):
        if self.degree == 5:
            return [CrvPoint.inf(0)]
        return [CrvPoint.inf(0), CrvPoint.inf(1)]

    def is_on_curve(self, pt):
        if pt.is_infinite:
            return pt.branch == 0 or self.degree == 6
        F = self.field
        return F.mul(pt.y, pt.y) == poly.evaluate(list(self.f), pt.x, F)

    def is_weierstrass(self, pt):
        if pt.is_infinite:
            return self.degree == 5
        return self.field.is_zero(pt.y)

    def involution(self, pt):
        if pt.is_infinite:
            return pt if self.degree == 5 else CrvPoint.inf(1 - pt.branch)
        return CrvPoint(pt.x, self.field.neg(pt.y))

    def points_over(self, x):
        """Ground-field points with the given x-coordinate (sorted)."""
        F = self.field
        v = poly.evaluate(list(self.f), x, F)
        if F.is_zero(v):
            return [CrvPoint(x, F.zero)]
        r = F.sqrt(v)
        if r is None:
            return []
        return sorted([CrvPoint(x, r), CrvPoint(x, F.neg(r))])

    @functools.cached_property
    def _points(self):
        F = self.field
        if not F.is_finite:
            raise CurveError("point enumeration requires a finite field")
        f = list(self.f)
        sq = {}
        for a in F.elements():
            sq.setdefault(F.mul(a, a), []).append(a)
        out = []
        for x in F.elements():
            v = poly.evaluate(f, x, F)
            for y in sorted(sq.get(v, ())):
                out.append(CrvPoint(x, y))
        out.sort()
        return tuple(out + self.infinity_points)

    def enumerate_points(self):
        return list(self._points)

    def weierstrass_points(self):
        """``(rational_points, nonrational_count)``; the total is always 6."""
        F = self.field
        pairs, residual = poly.roots(list(self.f), F)
        pts = [CrvPoint(r, F.zero) for r, _ in pairs]
        if self.degree == 5:
            pts.append(CrvPoint.inf(0))
        return pts, residual

    def canonical_divisor(self):
        """The fibre over infinity, a canonical divisor."""
        if self.degree == 5:
            return Divisor.point(CrvPoint.inf(0), 2)
        return Divisor.from_points(self.infinity_points)

    def canonical_fiber(self, t):
        F = self.field
        if t is None:
            return Fiber(None, self.canonical_divisor(), True)
        v = poly.evaluate(list(self.f), t, F)
        if F.is_zero(v):
            return Fiber(t, Divisor.point(CrvPoint(t, F.zero), 2), True)
        r = F.sqrt(v)
        if r is not None:
            return Fiber(t, Divisor.from_points([CrvPoint(t, r), CrvPoint(t, F.neg(r))]), True)
        if F.kind != "Fp":
            raise CurveError("non-split fibre needs a prime ground field")
        ext = self.extension()
        K = ext.field
        r = K.sqrt(K.lift(v))
        tt = K.lift(t)
        return Fiber(t, Divisor.from_points([CrvPoint(tt, r), CrvPoint(tt, K.neg(r))]), False)

    def fibers(self):
        """All fibres over P^1 of the ground field, infinity last."""
        F = self.field
        return [self.canonical_fiber(t) for t in F.elements()] + [self.canonical_fiber(None)]

    @functools.cache
    def extension(self):
        F = self.field
        if F.kind != "Fp":
            raise CurveError("only prime fields extend")
        K = F.extension()
        return HyperCurve(poly.lift(list(self.f), K), K)

    def lift_point(self, pt):
        if pt.is_infinite:
            return pt
        K = self.extension().field
        return CrvPoint(K.lift(pt.x), K.lift(pt.y))

    def lift_divisor(self, d):
        return Divisor({self.lift_point(p): k for p, k in d.items()})

    # -- text forms --------------------------------------------------------
    def parse_point(self, text):
        text = text.strip()
        m = re.fullmatch(r"inf([01])", text)
        if m:
            pt = CrvPoint.inf(int(m.group(1)))
        else:
            m = re.fullmatch(r"\(\s*([^,]+)\s*,\s*([^)]+)\s*\)", text)
            if not m:
                raise CurveError(f"cannot parse point {text!r}")
            F = self.field
            pt = CrvPoint(F.parse(m.group(1)), F.parse(m.group(2)))
        if not self.is_on_curve(pt):
            raise CurveError(f"point {text} is not on the curve")
        return pt

    def parse_divisor(self, text):
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise CurveError(f"divisor must be bracketed: {text!r}")
        body = text[1:-1].strip()
        coeffs = {}
        if body:
            for m in re.finditer(r"\s*(inf[01]|\([^)]*\))\s*:\s*(-?\d+)\s*(?:,|$)", body):
                pt = self.parse_point(m.group(1))
                coeffs[pt] = coeffs.get(pt, 0) + int(m.group(2))
            check = re.sub(r"\s*(inf[01]|\([^)]*\))\s*:\s*(-?\d+)\s*(?:,|$)", "", body)
            if check.strip():
                raise CurveError(f"cannot parse divisor {text!r}")
        return Divisor(coeffs)

    def fmt_divisor(self, d):
        return d.fmt(self.field)


def curve_new(f, field):
    return HyperCurve(f, field)


def hasse_weil_window(q, genus=2):
    import math

    r = 2 * genus * math.sqrt(q)
    return q + 1 - r, q + 1 + r
