"""Linearly normal embeddings by complete linear systems, and rational normal curves.

An :class:`Embedding` maps a genus-2 curve to P^n through a basis of L(D).
Points where some basis function has a pole are evaluated by clearing the
local parameter power ``t^{D(P)}``; the same convention gives the jets used
for spans of non-reduced divisors.
"""

from __future__ import annotations

import functools
import itertools

from .algebra import linalg, poly
from .algebra.linalg import ProjSubspace, normalize
from .curves.functions import PoleError, RationalFunction, expand, zero_divisor
from .curves.model import CurveError, Divisor, HyperCurve
from .curves.riemann_roch import rr_raw


class EmbeddingError(ValueError):
    pass


def _quadric_dim(images, n, F):
    monos = list(itertools.combinations_with_replacement(range(n + 1), 2))
    if len(images) < len(monos):
        raise EmbeddingError(f"{len(images)} points cannot certify {len(monos)} quadric conditions")
    rows = [[F.mul(v[i], v[j]) for i, j in monos] for v in images]
    return len(monos) - linalg.rank(rows, F)


class Embedding:
    """phi_|D| : C -> P^n with n = deg D - 2."""

    def __init__(self, curve: HyperCurve, divisor: Divisor, raw=None):
        self.curve = curve
        self.field = curve.field
        self.divisor = divisor
        raw = rr_raw(curve, divisor) if raw is None else raw
        self.raw = tuple(raw)
        self.basis = tuple(RationalFunction(a, b, d) for a, b, d in self.raw)
        self.n = len(self.basis) - 1
        self.den = list(self.raw[0][2]) if self.raw else [self.field.one]

    def __repr__(self):
        return f"Embedding(n={self.n}, D={self.divisor.fmt(self.field)}, {self.curve!r})"

    # -- points --------------------------------------------------------------
    def _fast(self, pt):
        F = self.field
        if pt.is_infinite or self.divisor[pt] or self.curve.involution(pt) in self.divisor.support:
            return None
        den = poly.evaluate(self.den, pt.x, F)
        if F.is_zero(den):
            return None
        vals = []
        for a, b, _ in self.raw:
            vals.append(F.add(poly.evaluate(list(a), pt.x, F), F.mul(poly.evaluate(list(b), pt.x, F), pt.y)))
        return vals

    def eval_point(self, pt):
        vals = self._fast(pt)
        if vals is None:
            vals = self.jets(pt, 1)[0]
        if all(self.field.is_zero(v) for v in vals):
            raise EmbeddingError(f"base point at {pt.fmt(self.field)}: embedding invalid")
        return normalize(vals, self.field)

    def jets(self, pt, order):
        """Rows j = 0..order-1: coefficient of t^(j - D(P)) in each basis function."""
        m = self.divisor[pt]
        cols = []
        for h in self.basis:
            s = expand(self.curve, h, pt, order - m)
            for k in range(s.val, -m):
                if not self.field.is_zero(s.coeff(k)):
                    raise PoleError("basis function exceeds the allowed pole order")
            cols.append([s.coeff(j - m) for j in range(order)])
        return [list(r) for r in zip(*cols)]

    @functools.cached_property
    def _images(self):
        return tuple((pt, self.eval_point(pt)) for pt in self.curve.enumerate_points())

    def rational_images(self):
        """``[(point, image)]`` over all rational points in enumeration order."""
        return list(self._images)

    # -- spans -----------------------------------------------------------------
    def divisor_span(self, Z):
        if not Z.is_effective:
            raise EmbeddingError("span needs an effective divisor")
        rows = []
        for pt, k in Z.items():
            if not self.curve.is_on_curve(pt):
                raise CurveError("support point is not on the curve")
            rows.extend(self.jets(pt, k))
        return linalg.subspace_from_rows(rows, self.field, self.n)

    def tangent_line(self, q):
        return self.divisor_span(Divisor.point(q, 2))

    # -- hyperplane sections ---------------------------------------------------
    def pullback(self, c):
        """The function sum c_i h_i (in L(D)) for a linear form ``c``."""
        F = self.field
        a, b = [], []
        for ci, (ai, bi, _) in zip(c, self.raw):
            a = poly.add(a, poly.scale(list(ai), ci, F), F)
            b = poly.add(b, poly.scale(list(bi), ci, F), F)
        return RationalFunction.make(a, b, self.den, F)

    def hyperplane_divisor(self, c):
        """``(rational part, residual degree)`` of the section cut by ``c``."""
        if len(c) != self.n + 1 or all(self.field.is_zero(x) for x in c):
            raise EmbeddingError("need a nonzero linear form on P^n")
        return zero_divisor(self.curve, self.pullback(c), self.divisor)

    def project(self, center: ProjSubspace, pts=None):
        """Linear projection from ``center``; returns ``(images, skipped)``."""
        ann = center.annihilator() if not center.is_empty else [
            [self.field.one if i == j else self.field.zero for i in range(self.n + 1)] for j in range(self.n + 1)
        ]
        out, skipped = {}, []
        items = self.rational_images() if pts is None else [(p, self.eval_point(p)) for p in pts]
        for pt, v in items:
            w = linalg.matvec(ann, v, self.field)
            if all(self.field.is_zero(x) for x in w):
                skipped.append(pt)
            else:
                out[pt] = normalize(w, self.field)
        return out, skipped

    def quadric_space_dim(self):
        return _quadric_dim([v for _, v in self.rational_images()], self.n, self.field)

    def coords_of(self, h):
        """Coordinates of ``h`` in L(D) w.r.t. the basis (None if outside)."""
        F = self.field
        pts = [pt for pt, _ in self._sample_points(self.n + 5, avoid=list(h.d))]
        rows = [self._fast(pt) for pt in pts]
        rhs = [F.mul(h.value(pt, F), poly.evaluate(self.den, pt.x, F)) for pt in pts]
        sol = linalg.solve(rows, rhs, F)
        if sol is None or self.pullback(sol) != RationalFunction.make(list(h.a), list(h.b), list(h.d), F):
            return None
        return sol

    def _sample_points(self, k, avoid=()):
        F = self.field
        out = []
        for pt, v in self.rational_images():
            if self._fast(pt) is not None and (not avoid or not F.is_zero(poly.evaluate(avoid, pt.x, F))):
                out.append((pt, v))
                if len(out) == k:
                    break
        return out

    # -- base change and manifest ----------------------------------------------
    @functools.cache
    def base_change(self):
        C = self.curve
        K = C.extension()
        raw = tuple((tuple(poly.lift(a, K.field)), tuple(poly.lift(b, K.field)), tuple(poly.lift(d, K.field))) for a, b, d in self.raw)
        return Embedding(K, C.lift_divisor(self.divisor), raw=raw)

    def manifest(self):
        F = self.field
        return {
            "field": F.tag,
            "f": poly.fmt(list(self.curve.f), F),
            "divisor": self.divisor.fmt(F),
            "n": self.n,
            "basis": [h.fmt(F) for h in self.basis],
        }


def embed(curve, divisor):
    deg = divisor.degree
    if deg < 2 * curve.genus + 1:
        raise EmbeddingError(f"degree {deg} < 5 is not very ample on a genus-2 curve")
    for pt in divisor.support:
        if not curve.is_on_curve(pt):
            raise CurveError("divisor support is not on the curve")
    e = Embedding(curve, divisor)
    if e.n != deg - curve.genus:
        raise EmbeddingError("Riemann-Roch dimension mismatch")
    return e


class RationalNormalCurve:
    """The degree-n rational normal curve, (a:b) -> (a^i b^(n-i))_i.

    Coordinates are the scaled coefficients of a binary form, so the image of
    (a:b) is the form (a x + b y)^n.
    """

    def __init__(self, n, field):
        if n < 1:
            raise ValueError("degree must be positive")
        self.n = n
        self.field = field

    def params(self):
        F = self.field
        return [(t, F.one) for t in F.elements()] + [(F.one, F.zero)]

    def eval_point(self, param):
        F = self.field
        a, b = param
        return normalize([F.mul(F.pow(a, i), F.pow(b, self.n - i)) for i in range(self.n + 1)], F)

    @functools.cached_property
    def _images(self):
        return tuple((t, self.eval_point(t)) for t in self.params())

    def rational_images(self):
        return list(self._images)

    def tangent_line(self, param):
        F = self.field
        a, b = param
        n = self.n
        p0 = [F.mul(F.pow(a, i), F.pow(b, n - i)) for i in range(n + 1)]
        # derivative along (a:b) -> (a + e*b' ...): use d/da if b != 0 else d/db
        if not F.is_zero(b):
            p1 = [F.mul(F(i), F.mul(F.pow(a, i - 1), F.pow(b, n - i))) if i else F.zero for i in range(n + 1)]
        else:
            p1 = [F.mul(F(n - i), F.mul(F.pow(a, i), F.pow(b, n - i - 1))) if i < n else F.zero for i in range(n + 1)]
        return linalg.subspace_from_rows([p0, p1], F, n)

    def quadric_space_dim(self):
        return _quadric_dim([v for _, v in self.rational_images()], self.n, self.field)

    def manifest(self):
        return {"field": self.field.tag, "rational_normal_curve": self.n}
