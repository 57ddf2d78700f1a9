"""Riemann-Roch spaces L(D) on y^2 = f(x) by an ansatz with exact linear conditions.

Every h in L(D) is written ``(a(x) + b(x) y) / d(x)`` where ``d`` clears the
affine poles allowed by D.  Degree bounds on ``a`` and ``b`` come from the
pole orders at infinity; all remaining conditions are vanishing of Laurent
coefficients at finitely many points, which is a linear system in the
coefficients of ``a`` and ``b``.
"""

from __future__ import annotations

import functools

from ..algebra import linalg, poly
from .functions import RationalFunction, eval_poly, local_xy
from .model import CurveError, Divisor


def _denominator(curve, D):
    F = curve.field
    exps = {}
    for pt, m in D.items():
        if m <= 0 or pt.is_infinite:
            continue
        e = m if not F.is_zero(pt.y) else (m + 1) // 2
        exps[pt.x] = max(exps.get(pt.x, 0), e)
    d = [F.one]
    for x0 in sorted(exps, key=F.key):
        d = poly.mul(d, poly.power([F.neg(x0), F.one], exps[x0], F), F)
    return d, sorted(exps, key=F.key)


def _ansatz(curve, D):
    d, xs = _denominator(curve, D)
    dd = poly.deg(d)
    if curve.degree == 5:
        m = D[curve.infinity_points[0]]
        A = (m + 2 * dd) // 2
        B = (m + 2 * dd - 5) // 2
    else:
        m = max(D[p] for p in curve.infinity_points)
        A = m + dd
        B = m + dd - 3
    return d, xs, A, B


def _condition_points(curve, D, xs):
    F = curve.field
    pts = set()
    for x0 in xs:
        pts.update(curve.points_over(x0))
    for pt, m in D.items():
        if m < 0:
            pts.add(pt)
    if curve.degree == 6:
        pts.update(curve.infinity_points)
    elif curve.infinity_points[0] in pts:
        pts.discard(curve.infinity_points[0])  # bounds are exact at infinity
    return sorted(pts)


def _monomial_rows(curve, pt, d, A, B, upto):
    """Laurent coefficients below t^upto of x^i/d and x^i y/d at ``pt``."""
    rel = 16
    while True:
        x, y = local_xy(curve, pt, rel)
        cur = eval_poly(d, x, rel).normalized().inv()
        powers = []
        for i in range(max(A, B) + 1):
            powers.append(cur)
            cur = cur.mul(x)
        cols = powers[: A + 1] + [s.mul(y) for s in powers[: B + 1]]
        if all(s.prec >= upto for s in cols):
            lo = min(s.val for s in cols)
            return [[s.coeff(k) for s in cols] for k in range(lo, upto)]
        rel *= 2
        if rel > 4096:
            raise ArithmeticError("precision runaway in Riemann-Roch conditions")


@functools.lru_cache(maxsize=2048)
def rr_basis(curve, D: Divisor):
    """Basis of L(D) = {h : div(h) + D >= 0}, as RationalFunctions."""
    return tuple(RationalFunction.make(list(a), list(b), list(d), curve.field) for a, b, d in _rr_raw(curve, D))


@functools.lru_cache(maxsize=2048)
def _rr_raw(curve, D):
    F = curve.field
    for pt in D.support:
        if not curve.is_on_curve(pt):
            raise CurveError("divisor support is not on the curve")
    if D.degree < 0:
        return ()
    d, xs, A, B = _ansatz(curve, D)
    nunk = max(A + 1, 0) + max(B + 1, 0)
    if nunk == 0:
        return ()
    A, B = max(A, -1), max(B, -1)
    rows = []
    for pt in _condition_points(curve, D, xs):
        rows.extend(_monomial_rows(curve, pt, d, A, B, -D[pt]))
    kernel = linalg.nullspace(rows, F, ncols=nunk)
    # canonical basis: reduced echelon form of the kernel, highest unknowns first
    kernel = [list(reversed(v)) for v in kernel]
    kernel = linalg.row_basis(kernel, F)
    kernel = [list(reversed(v)) for v in kernel]
    out = []
    for v in kernel:
        a = poly.strip(v[: A + 1], F)
        b = poly.strip(v[A + 1:], F)
        out.append((tuple(a), tuple(b), tuple(d)))
    return tuple(out)


def rr_raw(curve, D):
    """L(D) basis as ``(a, b, d)`` tuples sharing the denominator ``d``."""
    return _rr_raw(curve, D)


def rr_dim(curve, D):
    return len(_rr_raw(curve, D))
