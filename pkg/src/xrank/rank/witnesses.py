"""Constructive rank witnesses: tangent points and points of spans of divisors.

Both constructions sample hyperplane sections through prescribed rational
points, so that the free part of the section is small and splits over the
ground field with reasonable probability.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field as dc_field

from ..algebra import linalg
from ..curves.functions import zero_divisor
from ..curves.jacobian import linearly_equivalent
from ..curves.model import Divisor
from ..curves.riemann_roch import rr_basis
from .certs import NotFoundUpTo, make_cert, minimize


class HypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class TangentNotFound(NotFoundUpTo):
    histogram: dict = dc_field(default_factory=dict)


def _rational_pool(emb, avoid):
    return [pt for pt, _ in emb.rational_images() if pt not in avoid and emb._fast(pt) is not None]


def _solve_combination(rows, F, rng):
    """A random nonzero vector in the kernel of ``rows`` (None if trivial)."""
    ker = linalg.nullspace(rows, F, ncols=len(rows[0])) if rows else None
    if not ker:
        return None
    while True:
        lam = [F.random(rng) for _ in ker]
        v = [F.sum(F.mul(c, k[i]) for c, k in zip(lam, ker)) for i in range(len(ker[0]))]
        if any(not F.is_zero(x) for x in v):
            return v


class _TangentSystem:
    """Data for A in |D - 2Q - K| and the point <A> meet T_Q."""

    def __init__(self, emb, Q):
        C = emb.curve
        self.emb, self.Q = emb, Q
        self.K = C.canonical_divisor()
        self.M = emb.divisor - Divisor.point(Q, 2) - self.K
        self.LM = list(rr_basis(C, self.M))
        LK = rr_basis(C, self.K)
        LK2 = rr_basis(C, self.K + Divisor.point(Q, 2))
        k3 = None
        for k in LK2:
            if not _in_span(C, k, LK):
                k3 = k
                break
        self.k3 = k3
        # coordinates of h_j * k3 in the L(D) basis
        self.cols = []
        for h in self.LM:
            c = emb.coords_of(h.mul(k3, C))
            if c is None:
                raise ArithmeticError("product left L(D); Riemann-Roch data inconsistent")
            self.cols.append(c)
        self.T = emb.tangent_line(Q)

    def condition(self, P):
        F = self.emb.field
        return [F.dot(c, P) for c in self.cols]

    def divisor_of(self, lam):
        F = self.emb.field
        C = self.emb.curve
        h = None
        for c, g in zip(lam, self.LM):
            if F.is_zero(c):
                continue
            t = g.scale(c, F)
            h = t if h is None else h.add(t, F)
        if h is None or h.is_zero:
            return None, None
        return zero_divisor(C, h, self.M)

    def meet_point(self, A):
        span = self.emb.divisor_span(A)
        meet = linalg.subspace_meet(span, self.T)
        return meet


def _in_span(C, k, basis):
    F = C.field
    pts = [pt for pt in C.enumerate_points() if not pt.is_infinite][:40] if F.is_finite else []
    good = [pt for pt in pts if all(not F.is_zero(_den(b, pt, F)) for b in list(basis) + [k])]
    rows = [[b.value(pt, F) for b in basis] for pt in good[: len(basis) + 6]]
    rhs = [k.value(pt, F) for pt in good[: len(basis) + 6]]
    return linalg.solve(rows, rhs, F) is not None


def _den(h, pt, F):
    from ..algebra import poly

    return poly.evaluate(list(h.d), pt.x, F)


def _check_exclusion(emb, Q):
    C = emb.curve
    n = emb.n
    if n < 5:
        raise HypothesisError("tangent decomposition needs n >= 5")
    if n == 5:
        K = C.canonical_divisor()
        if linearly_equivalent(C, emb.divisor, 2 * K + Divisor.point(Q, 3)):
            raise HypothesisError("excluded case: O(1) = omega^2(3Q)")


def _lin_row(pt, LM, F):
    return [g.value(pt, F) for g in LM]


def tangent_decomposition(emb, Q, P, attempts=200, seed=0):
    """Size-(n-2) certificate for P on T_Q X from a reduced split A in |D - 2Q - K|."""
    _check_exclusion(emb, Q)
    F = emb.field
    P = linalg.normalize(list(P), F)
    T = emb.tangent_line(Q)
    if not linalg.subspace_contains(T, P):
        raise HypothesisError("P is not on the tangent line")
    if linalg.normalize(emb.eval_point(Q), F) == P:
        raise HypothesisError("P is the image of Q")
    sys_ = _TangentSystem(emb, Q)
    n = emb.n
    rng = random.Random(seed)
    cond = sys_.condition(P)
    pool = _rational_pool(emb, {Q})
    hist = Counter()
    for attempt in range(attempts):
        extra = rng.sample(pool, min(max(n - 5, 0), len(pool)))
        rows = [cond] + [_lin_row(pt, sys_.LM, F) for pt in extra]
        lam = _solve_combination(rows, F, rng)
        if lam is None:
            hist["degenerate"] += 1
            continue
        A, residual = sys_.divisor_of(lam)
        if A is None:
            continue
        if residual:
            hist["not split"] += 1
            continue
        if not A.is_reduced or A[Q] or A.degree != n - 2:
            hist["not reduced"] += 1
            continue
        wit = A.support
        cert = make_cert(emb, [P], wit, F, kind="upper", seed=seed, attempts=attempt + 1, scope=f"rational points over {F.tag}")
        return cert
    return TangentNotFound(n - 2, f"no rational split A within {attempts} attempts", dict(hist))


def tangent_points_from_A(emb, Q, samples=50, seed=0):
    """Sample reduced split A and report the points <A> meet T_Q with their witnesses."""
    _check_exclusion(emb, Q)
    F = emb.field
    sys_ = _TangentSystem(emb, Q)
    n = emb.n
    rng = random.Random(seed)
    pool = _rational_pool(emb, {Q})
    out = []
    for attempt in range(samples):
        extra = rng.sample(pool, min(max(n - 4, 0), len(pool)))
        rows = [_lin_row(pt, sys_.LM, F) for pt in extra]
        lam = _solve_combination(rows, F, rng)
        if lam is None:
            continue
        A, residual = sys_.divisor_of(lam)
        if A is None or residual or not A.is_reduced or A[Q]:
            continue
        meet = sys_.meet_point(A)
        if meet.dim != 0:
            continue
        out.append((A, meet.point(), attempt))
    return out


# -- spans of divisors -------------------------------------------------------------


def is_excluded_a3(emb, Z):
    C = emb.curve
    deg_x = emb.divisor.degree
    if deg_x != 2 * C.genus + Z.degree:
        return False
    return linearly_equivalent(C, emb.divisor - Z, C.genus * C.canonical_divisor())


def check_a3_hypotheses(emb, Z):
    n = emb.n
    s = Z.degree
    if not Z.is_effective:
        raise HypothesisError("Z must be effective")
    if n < 2 * s + 2 or n < 2 * emb.curve.genus + s + 1:
        raise HypothesisError(f"need n >= max(2s+2, 2g+s+1); got n={n}, s={s}")
    if emb.divisor_span(Z).dim != s - 1:
        raise HypothesisError("<Z> does not have the expected dimension")
    if is_excluded_a3(emb, Z):
        raise HypothesisError("excluded case: O(1)(-Z) is twice the hyperelliptic fibre")


def witness_a3(emb, Z, attempts=20, seed=0):
    """Points P in <Z> with certificates of size <= n + 1 - deg Z.

    Each attempt draws a hyperplane through <Z> and n - s - 1 random rational
    points; the residual B of the section must be reduced, split and off Z.
    Dropping one point of B gives S_B whose span meets <Z> in one point.
    """
    check_a3_hypotheses(emb, Z)
    F = emb.field
    n, s = emb.n, Z.degree
    span_z = emb.divisor_span(Z)
    ann = span_z.annihilator()
    pool = _rational_pool(emb, set(Z.support))
    rng = random.Random(seed)
    out = []
    for attempt in range(attempts):
        extra = rng.sample(pool, min(n - s - 1, len(pool)))
        # c = sum mu_i ann_i with c(R) = 0 for the extra points
        rows = [[F.dot(a, emb.eval_point(pt)) for a in ann] for pt in extra]
        mu = _solve_combination(rows, F, rng)
        if mu is None:
            continue
        c = [F.sum(F.mul(m, a[i]) for m, a in zip(mu, ann)) for i in range(n + 1)]
        section, residual = emb.hyperplane_divisor(c)
        if residual:
            continue
        B = section - Z
        if not B.is_effective or any(B[pt] for pt in Z.support) or not B.is_reduced:
            continue
        pts = B.support
        for drop in range(len(pts)):
            SB = pts[:drop] + pts[drop + 1:]
            span_s = linalg.subspace_span([emb.eval_point(x) for x in SB], F, n)
            meet = linalg.subspace_meet(span_z, span_s)
            if meet.dim == 0:
                P = meet.point()
                wit = minimize(emb, [P], SB, F)
                cert = make_cert(emb, [P], wit, F, kind="upper", seed=seed, attempts=attempt + 1,
                                 scope=f"rational points over {F.tag}")
                out.append((P, cert, B))
                break
    return out
