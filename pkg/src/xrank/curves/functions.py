"""Rational functions (a + b*y)/d on a hyperelliptic curve and their local expansions.

Local parameters are fixed per point kind so jets are reproducible:

* affine, y != 0:   t = x - x_P
* affine, y == 0:   t = y
* infinity, deg 5:  t = x^2 / y
* infinity, deg 6:  t = 1 / x   (branch b has y / x^3 -> +-sqrt(lc f))
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from ..algebra import poly
from .model import CrvPoint, Divisor


class PoleError(ValueError):
    pass


_EXACT_ZERO = 10**9  # valuation used for the exact zero series


class Series:
    """Truncated Laurent series ``t^val * (c[0] + c[1] t + ... + O(t^len(c)))``."""

    __slots__ = ("F", "val", "c")

    def __init__(self, F, val, c):
        self.F, self.val, self.c = F, val, list(c)

    @property
    def prec(self):
        """Absolute precision: coefficients below t^prec are exact."""
        return self.val + len(self.c)

    @classmethod
    def const(cls, F, a, rel):
        return cls(F, 0, [a] + [F.zero] * (rel - 1))

    def normalized(self):
        F = self.F
        k = 0
        while k < len(self.c) and F.is_zero(self.c[k]):
            k += 1
        return Series(F, self.val + k, self.c[k:])

    def coeff(self, k):
        i = k - self.val
        if k >= self.prec:
            raise ArithmeticError("coefficient beyond known precision")
        if i < 0:
            return self.F.zero
        return self.c[i]

    def mul(self, other):
        F = self.F
        n = min(len(self.c), len(other.c))
        a, b = self.c[:n], other.c[:n]
        out = [F.zero] * n
        for i, x in enumerate(a):
            if F.is_zero(x):
                continue
            for j in range(n - i):
                y = b[j]
                if not F.is_zero(y):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Series(F, self.val + other.val, out)

    def add(self, other):
        F = self.F
        lo = min(self.val, other.val)
        hi = min(self.prec, other.prec)
        out = []
        for k in range(lo, hi):
            out.append(F.add(_get(self, k), _get(other, k)))
        return Series(F, lo, out)

    def scale(self, a):
        F = self.F
        return Series(F, self.val, [F.mul(a, x) for x in self.c])

    def shift(self, k):
        return Series(self.F, self.val + k, self.c)

    def inv(self):
        s = self.normalized()
        F = self.F
        if not s.c:
            raise ArithmeticError("series not invertible at this precision")
        n = len(s.c)
        inv0 = F.inv(s.c[0])
        out = [inv0]
        for k in range(1, n):
            acc = F.zero
            for j in range(1, k + 1):
                acc = F.add(acc, F.mul(s.c[j], out[k - j]))
            out.append(F.neg(F.mul(acc, inv0)))
        return Series(F, -s.val, out)

    def sqrt(self, lead):
        """Square root with given leading coefficient; ``val`` must be even."""
        s = self.normalized()
        F = self.F
        if s.val % 2:
            raise ArithmeticError("odd valuation has no square root")
        g = s.c
        n = len(g)
        out = [lead]
        inv2y = F.inv(F.add(lead, lead))
        for k in range(1, n):
            acc = g[k]
            for i in range(1, k):
                acc = F.sub(acc, F.mul(out[i], out[k - i]))
            out.append(F.mul(acc, inv2y))
        return Series(F, s.val // 2, out)


def _get(s, k):
    i = k - s.val
    if i < 0:
        return s.F.zero
    return s.c[i]


def eval_poly(f, s, rel):
    """Evaluate the polynomial ``f`` at the series ``s``."""
    F = s.F
    if not f:
        return Series(F, _EXACT_ZERO, [])
    acc = Series.const(F, f[-1], rel)
    for c in reversed(f[:-1]):
        acc = acc.mul(s)
        acc = acc.add(Series.const(F, c, max(rel, acc.prec)))
    return acc


def local_xy(curve, pt, rel):
    """Expansions of x and y at ``pt`` with relative precision ``rel``."""
    return _local_xy(curve, pt, rel)


@functools.lru_cache(maxsize=4096)
def _local_xy(curve, pt, rel):
    F = curve.field
    f = list(curve.f)
    if not pt.is_infinite and not F.is_zero(pt.y):
        x = Series(F, 0, [pt.x, F.one] + [F.zero] * (rel - 2))
        g = poly.taylor_shift(f, pt.x, F)
        g = g + [F.zero] * (rel - len(g))
        y = Series(F, 0, g[:rel]).sqrt(pt.y)
        return x, y
    if not pt.is_infinite:
        # x = w + u(t), f(w + u) = t^2, with t = y
        g = poly.taylor_shift(f, pt.x, F)
        inv_g1 = F.inv(g[1])
        t2 = Series(F, 2, [F.one] + [F.zero] * (rel - 1))
        u = Series(F, 2, [inv_g1] + [F.zero] * (rel - 1))
        for _ in range(rel // 2 + 2):
            # u <- (t^2 - sum_{k>=2} g_k u^k) / g1
            acc = Series(F, 2, [F.zero] * rel)
            upow = u.mul(u)
            for k in range(2, len(g)):
                acc = acc.add(upow.scale(g[k]))
                upow = upow.mul(u)
            u = t2.add(acc.scale(F.neg(F.one))).scale(inv_g1)
            u = Series(F, u.val, u.c[:rel])
        x = u.add(Series.const(F, pt.x, rel + 2))
        y = Series(F, 1, [F.one] + [F.zero] * (rel - 1))
        return x, y
    rev = list(reversed(f))  # G(u) = u^deg f(1/u)
    if curve.degree == 5:
        t2 = Series(F, 2, [F.one] + [F.zero] * (rel - 1))
        u = Series(F, 2, [rev[0]] + [F.zero] * (rel - 1))
        for _ in range(rel // 2 + 2):
            u = t2.mul(eval_poly(rev, u, rel))
        x = u.inv()
        y = x.mul(x).shift(-1)
        return x, y
    lead = curve.inf_sqrt if pt.branch == 0 else F.neg(curve.inf_sqrt)
    G = Series(F, 0, (rev + [F.zero] * rel)[:rel])
    y = G.sqrt(lead).shift(-3)
    x = Series(F, -1, [F.one] + [F.zero] * (rel - 1))
    return x, y


@dataclass(frozen=True)
class RationalFunction:
    """``(a(x) + b(x) y) / d(x)`` with coefficient tuples, lowest degree first."""

    a: tuple
    b: tuple
    d: tuple

    @classmethod
    def make(cls, a, b, d, F):
        a, b, d = poly.strip(a, F), poly.strip(b, F), poly.strip(d, F)
        if not d:
            raise ZeroDivisionError("zero denominator")
        g = poly.gcd(poly.gcd(a, b, F) if (a or b) else d, d, F)
        if poly.deg(g) > 0:
            a, b, d = poly.quo(a, g, F), poly.quo(b, g, F), poly.quo(d, g, F)
        c = F.inv(d[-1])
        return cls(tuple(poly.scale(a, c, F)), tuple(poly.scale(b, c, F)), tuple(poly.scale(d, c, F)))

    @classmethod
    def constant(cls, c, F):
        return cls.make([c], [], [F.one], F)

    @property
    def is_zero(self):
        return not self.a and not self.b

    def mul(self, other, curve):
        F = curve.field
        f = list(curve.f)
        a1, b1, a2, b2 = list(self.a), list(self.b), list(other.a), list(other.b)
        a = poly.add(poly.mul(a1, a2, F), poly.mul(poly.mul(b1, b2, F), f, F), F)
        b = poly.add(poly.mul(a1, b2, F), poly.mul(a2, b1, F), F)
        return RationalFunction.make(a, b, poly.mul(list(self.d), list(other.d), F), F)

    def add(self, other, F):
        d1, d2 = list(self.d), list(other.d)
        a = poly.add(poly.mul(list(self.a), d2, F), poly.mul(list(other.a), d1, F), F)
        b = poly.add(poly.mul(list(self.b), d2, F), poly.mul(list(other.b), d1, F), F)
        return RationalFunction.make(a, b, poly.mul(d1, d2, F), F)

    def scale(self, c, F):
        return RationalFunction.make(poly.scale(list(self.a), c, F), poly.scale(list(self.b), c, F), list(self.d), F)

    def lift(self, K):
        return RationalFunction(tuple(poly.lift(self.a, K)), tuple(poly.lift(self.b, K)), tuple(poly.lift(self.d, K)))

    def value(self, pt, F):
        """Direct evaluation at an affine point where d does not vanish."""
        den = poly.evaluate(list(self.d), pt.x, F)
        if F.is_zero(den):
            raise PoleError("denominator vanishes; use the local expansion")
        num = F.add(poly.evaluate(list(self.a), pt.x, F), F.mul(poly.evaluate(list(self.b), pt.x, F), pt.y))
        return F.div(num, den)

    def norm(self, curve):
        """a^2 - b^2 f, whose roots carry the x-coordinates of the zeros."""
        F = curve.field
        a, b = list(self.a), list(self.b)
        return poly.sub(poly.mul(a, a, F), poly.mul(poly.mul(b, b, F), list(curve.f), F), F)

    def fmt(self, F):
        num = poly.fmt(list(self.a), F) if self.a else ""
        if self.b:
            bt = poly.fmt(list(self.b), F)
            bt = "y" if list(self.b) == [F.one] else f"({bt})*y"
            num = f"{num} + {bt}" if num else bt
        num = num or "0"
        if list(self.d) == [F.one]:
            return num
        return f"({num})/({poly.fmt(list(self.d), F)})"


def expand(curve, h, pt, upto):
    """Laurent expansion of ``h`` at ``pt`` exact through t^(upto-1)."""
    F = curve.field
    rel = max(8, upto + 8)
    while True:
        x, y = local_xy(curve, pt, rel)
        num = eval_poly(list(h.a), x, rel).add(eval_poly(list(h.b), x, rel).mul(y))
        den = eval_poly(list(h.d), x, rel).normalized()
        if not den.c:
            rel *= 2
            continue
        s = num.mul(den.inv())
        if s.prec >= upto:
            return s
        rel *= 2
        if rel > 4096:
            raise ArithmeticError("expansion precision runaway")


def valuation(curve, h, pt, bound):
    """Order of ``h`` at ``pt``; returns ``bound`` if it is at least ``bound``."""
    if h.is_zero:
        return bound
    s = expand(curve, h, pt, bound)
    F = curve.field
    for k in range(s.val, bound):
        if not F.is_zero(s.coeff(k)):
            return k
    return bound


def local_jet(curve, h, pt, order):
    """First ``order`` coefficients of ``h`` in the local parameter at ``pt``."""
    if order < 1:
        raise ValueError("order must be positive")
    s = expand(curve, h, pt, order)
    F = curve.field
    for k in range(s.val, 0):
        if not F.is_zero(s.coeff(k)):
            raise PoleError(f"h has a pole of order {-k} at {pt.fmt(F)}")
    return [s.coeff(k) for k in range(order)]


def candidate_points(curve, h, D):
    """Rational points where div(h) + D can be nonzero."""
    F = curve.field
    xs = set()
    for pt in D.support:
        if not pt.is_infinite:
            xs.add(pt.x)
    for pol in (h.norm(curve), list(h.d)):
        if poly.deg(pol) > 0:
            for r, _ in poly.roots(pol, F)[0]:
                xs.add(r)
    pts = []
    for x in sorted(xs, key=F.key):
        pts.extend(curve.points_over(x))
    return pts + curve.infinity_points


def zero_divisor(curve, h, D):
    """Rational part of div(h) + D and the degree left over extensions.

    ``h`` must lie in L(D), so the divisor is effective of degree deg D.
    """
    if h.is_zero:
        raise ValueError("the zero function has no divisor")
    total = D.degree
    bound = total + 1
    out = {}
    for pt in candidate_points(curve, h, D):
        m = D[pt]
        v = valuation(curve, h, pt, bound - m)
        k = v + m
        if k < 0:
            raise ValueError(f"h has a pole beyond D at {pt.fmt(curve.field)}")
        if k:
            out[pt] = k
    Z = Divisor(out)
    return Z, total - Z.degree


def principal_divisor(curve, h, D):
    """div(h) restricted to rational points, given any D with h in L(D)."""
    Z, residual = zero_divisor(curve, h, D)
    return Z - D, residual
