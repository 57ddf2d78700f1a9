"""Jacobian arithmetic on imaginary models y^2 = f(x), deg f = 5, via Cantor's algorithm.

A class is stored as a Mumford pair ``(u, v)``: ``u`` monic with deg u <= 2,
deg v < deg u and u | v^2 - f.  It stands for the reduced divisor cut by
``u = 0, y = v`` minus ``deg u`` times the point at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import poly
from .model import CrvPoint, CurveError, Divisor


@dataclass(frozen=True)
class MumfordClass:
    u: tuple
    v: tuple

    @property
    def is_identity(self):
        return self.u == (self.u[0],) and len(self.u) == 1

    @property
    def weight(self):
        return len(self.u) - 1

    def fmt(self, F):
        return f"({poly.fmt(list(self.u), F)}, {poly.fmt(list(self.v), F)})"


def _check(curve):
    if curve.degree != 5:
        raise CurveError("Cantor arithmetic needs the degree-5 model")


def identity(curve):
    return MumfordClass((curve.field.one,), ())


def _normal(curve, u, v):
    F = curve.field
    u = poly.monic(u, F)
    v = poly.rem(v, u, F)
    return MumfordClass(tuple(u), tuple(v))


def _reduce(curve, u, v):
    F = curve.field
    f = list(curve.f)
    while poly.deg(u) > 2:
        u = poly.exquo(poly.sub(f, poly.mul(v, v, F), F), u, F)
        v = poly.rem(poly.neg(v, F), u, F)
    return _normal(curve, u, v)


def jac_add(curve, a, b):
    _check(curve)
    F = curve.field
    u1, v1, u2, v2 = list(a.u), list(a.v), list(b.u), list(b.v)
    d0, e1, e2 = poly.xgcd(u1, u2, F)
    d, c1, s3 = poly.xgcd(d0, poly.add(v1, v2, F), F)
    s1, s2 = poly.mul(c1, e1, F), poly.mul(c1, e2, F)
    u = poly.exquo(poly.mul(u1, u2, F), poly.mul(d, d, F), F)
    num = poly.add(
        poly.add(poly.mul(poly.mul(s1, u1, F), v2, F), poly.mul(poly.mul(s2, u2, F), v1, F), F),
        poly.mul(s3, poly.add(poly.mul(v1, v2, F), list(curve.f), F), F),
        F,
    )
    v = poly.rem(poly.exquo(num, d, F), u, F)
    return _reduce(curve, u, v)


def jac_neg(curve, a):
    F = curve.field
    return MumfordClass(a.u, tuple(poly.neg(list(a.v), F)))


def jac_double(curve, a):
    return jac_add(curve, a, a)


def jac_mul(curve, k, a):
    if k < 0:
        return jac_mul(curve, -k, jac_neg(curve, a))
    result, base = identity(curve), a
    while k:
        if k & 1:
            result = jac_add(curve, result, base)
        base = jac_add(curve, base, base)
        k >>= 1
    return result


def point_class(curve, pt):
    """Class of P - inf."""
    _check(curve)
    F = curve.field
    if pt.is_infinite:
        return identity(curve)
    return _normal(curve, [F.neg(pt.x), F.one], poly.const(pt.y, F))


def class_of(curve, D):
    """Class of D - deg(D) inf."""
    _check(curve)
    out = identity(curve)
    for pt, k in D.items():
        if not curve.is_on_curve(pt):
            raise CurveError("support point is not on the curve")
        if not pt.is_infinite:
            out = jac_add(curve, out, jac_mul(curve, k, point_class(curve, pt)))
    return out


def to_divisor(curve, a):
    """Rational reduced divisor of ``a`` (None if u does not split)."""
    F = curve.field
    if a.is_identity:
        return Divisor()
    pairs, residual = poly.roots(list(a.u), F)
    if residual:
        return None
    pts = {}
    for r, m in pairs:
        pt = CrvPoint(r, poly.evaluate(list(a.v), r, F))
        pts[pt] = m
    return Divisor(pts)


def linearly_equivalent(curve, d1, d2, method=None):
    """d1 ~ d2.  ``method`` is ``"jacobian"``, ``"rr"`` or None (automatic)."""
    if d1.degree != d2.degree:
        raise ValueError("degree mismatch")
    if method is None:
        method = "jacobian" if curve.degree == 5 else "rr"
    if method == "jacobian":
        return class_of(curve, d1 - d2).is_identity
    from .riemann_roch import rr_dim

    return rr_dim(curve, d1 - d2) >= 1


# -- group enumeration over F_p ---------------------------------------------


def enumerate_jacobian(curve):
    """All classes of J(F_p) (prime field, degree-5 model)."""
    _check(curve)
    F = curve.field
    if F.kind != "Fp":
        raise CurveError("enumeration needs a prime field")
    f = list(curve.f)
    out = [identity(curve)]
    pts = [p for p in curve.enumerate_points() if not p.is_infinite]
    for pt in pts:
        out.append(point_class(curve, pt))
    # rational pairs {P1, P2}, P2 != iota(P1); P1 == P2 allowed when y != 0
    n = len(pts)
    for i in range(n):
        for j in range(i, n):
            P1, P2 = pts[i], pts[j]
            if P1.x == P2.x:
                if i != j or F.is_zero(P1.y):
                    continue
                u = poly.power([F.neg(P1.x), F.one], 2, F)
                # tangent-order lift of v: v(x1) = y1, v'(x1) = f'(x1) / (2 y1)
                slope = F.div(poly.evaluate(list(curve.df), P1.x, F), F.add(P1.y, P1.y))
            else:
                u = poly.mul([F.neg(P1.x), F.one], [F.neg(P2.x), F.one], F)
                slope = F.div(F.sub(P2.y, P1.y), F.sub(P2.x, P1.x))
            v = [F.sub(P1.y, F.mul(slope, P1.x)), slope]
            out.append(_normal(curve, u, v))
    # conjugate pairs over F_p^2 with x outside F_p
    K = F.extension()
    fK = poly.lift(f, K)
    for a in range(F.p):
        for b in range(F.p):
            u = [b, a, 1]  # x^2 + a x + b
            disc = F.sub(F.mul(a, a), F.mul(4, b))
            if F.is_square(disc):
                continue
            alpha = _quad_root(K, a, b)
            fa = poly.evaluate(fK, alpha, K)
            beta = K.sqrt(fa)
            if beta is None:
                continue
            abar, bbar = K.conj(alpha), K.conj(beta)
            for bb, bc in ((beta, bbar), (K.neg(beta), K.neg(bbar))):
                c1 = K.div(K.sub(bb, bc), K.sub(alpha, abar))
                c0 = K.sub(bb, K.mul(c1, alpha))
                v = poly.strip([c0[0], c1[0]], F)
                out.append(_normal(curve, u, v))
                if fa == K.zero:
                    break
    return out


def _quad_root(K, a, b):
    # root of x^2 + a x + b with non-square discriminant: (-a + sqrt(disc)) / 2
    disc = K.sub(K.mul(K.lift(a), K.lift(a)), K.mul(K.lift(4), K.lift(b)))
    return K.div(K.add(K.neg(K.lift(a)), K.sqrt(disc)), K.lift(2))


def jacobian_order(curve):
    """#J(F_p) from point counts over F_p and F_p^2."""
    F = curve.field
    n1 = len(curve.enumerate_points())
    n2 = len(curve.extension().enumerate_points())
    q = F.order
    return (n1 * n1 + n2) // 2 - q


def two_torsion(curve):
    """J[2](F_p) from the factorisation of f: classes (u, 0) with u | f, deg u <= 2."""
    _check(curve)
    F = curve.field
    f = list(curve.f)
    out = [identity(curve)]
    rts = [r for r, _ in poly.roots(f, F)[0]]
    for r in rts:
        out.append(MumfordClass(tuple([F.neg(r), F.one]), ()))
    for i in range(len(rts)):
        for j in range(i + 1, len(rts)):
            out.append(MumfordClass(tuple(poly.from_roots([rts[i], rts[j]], F)), ()))
    if F.is_finite and F.kind == "Fp":
        # irreducible quadratic factors of f
        for a in range(F.p):
            for b in range(F.p):
                u = [b, a, 1]
                if not F.is_square(F.sub(F.mul(a, a), F.mul(4, b))) and not poly.rem(f, u, F):
                    out.append(MumfordClass(tuple(u), ()))
    return out


def torsion(curve, m, elements=None):
    """J[m](F_p) by scanning the whole group."""
    elements = enumerate_jacobian(curve) if elements is None else elements
    return [a for a in elements if jac_mul(curve, m, a).is_identity]
