"""Exhaustive X-rank and border-rank searches over rational points."""

from __future__ import annotations

import itertools

from ..algebra import linalg
from ..algebra.linalg import ProjSubspace, normalize
from ..curves.model import Divisor
from . import kernel
from .certs import NotFoundUpTo, StratumCert, make_cert


def _scope(emb):
    return f"rational points over {emb.field.tag}"


def _require_prime(emb):
    if emb.field.kind != "Fp":
        raise ValueError("exhaustive search needs a prime field")


def _target_rows(target):
    if isinstance(target, ProjSubspace):
        return [list(r) for r in target.basis]
    return [list(target)]


def exhaustive_rank(emb, P, r_max, find_all=False, kmin=1):
    """Least rational witness for a point (or subspace) target, or NotFoundUpTo."""
    _require_prime(emb)
    F = emb.field
    items = emb.rational_images()
    rows = _target_rows(P)
    k, found = kernel.search([v for _, v in items], rows, F.p, r_max, kmin=kmin, find_all=find_all)
    if k is None:
        return NotFoundUpTo(r_max, _scope(emb))
    certs = [make_cert(emb, rows, [items[i][0] for i in idx], F, scope=_scope(emb)) for idx in found]
    return certs if find_all else certs[0]


def subspace_rank(emb, V, r_max, find_all=False):
    return exhaustive_rank(emb, V, r_max, find_all=find_all)


def contains(emb, pts, P, F=None):
    F = F or emb.field
    e = emb if F == emb.field else emb.base_change()
    span = linalg.subspace_span([e.eval_point(x) for x in pts], F, emb.n)
    return all(linalg.subspace_contains(span, r) for r in _target_rows(P))


# -- border rank ---------------------------------------------------------------


def _fat_parts(pts, s):
    """Non-reduced parts: ``{point: mult >= 2}`` with total <= s, ordered by support size."""
    out = []
    for size in range(1, s // 2 + 1):
        for combo in itertools.combinations(range(len(pts)), size):
            for mults in itertools.product(range(2, s + 1), repeat=size):
                if sum(mults) <= s:
                    out.append((size, combo, mults))
    return out


def stratum(emb, P, s_max):
    """Least s with P in the span of an effective degree-s divisor over rational points."""
    _require_prime(emb)
    F = emb.field
    items = emb.rational_images()
    pts = [pt for pt, _ in items]
    target = list(P)
    for s in range(1, s_max + 1):
        # non-reduced schemes first, then reduced sets (by support size)
        for size, combo, mults in sorted(_fat_parts(pts, s), key=lambda t: (t[0], t[1], t[2])):
            fat = Divisor({pts[i]: m for i, m in zip(combo, mults)})
            rest = s - fat.degree
            span = emb.divisor_span(fat)
            if rest == 0:
                if linalg.subspace_contains(span, target):
                    return StratumCert(s, fat, tuple(target), _scope(emb))
                continue
            if linalg.subspace_contains(span, target):
                continue  # found at a smaller s already
            hit = _reduced_completion(emb, span, target, rest, set(combo), items)
            if hit is not None:
                scheme = fat + Divisor.from_points(hit)
                if scheme.is_reduced:
                    continue
                return StratumCert(s, scheme, tuple(target), _scope(emb))
        k, found = kernel.search([v for _, v in items], [target], F.p, s, kmin=s)
        if k == s:
            return StratumCert(s, Divisor.from_points(items[i][0] for i in found[0]), tuple(target), _scope(emb))
    return NotFoundUpTo(s_max, _scope(emb))


def _reduced_completion(emb, fat_span, target, rest, exclude, items):
    """Least reduced ``rest``-set R off the fat support with target in <fat, R>."""
    F = emb.field
    ann = fat_span.annihilator()
    proj = [linalg.matvec(ann, v, F) for _, v in items]
    pt_img = linalg.matvec(ann, target, F)
    if all(F.is_zero(c) for c in pt_img):
        return None
    keep = [i for i in range(len(items)) if i not in exclude and any(not F.is_zero(c) for c in proj[i])]
    if not keep:
        return None
    k, found = kernel.search([proj[i] for i in keep], [pt_img], F.p, rest, kmin=rest)
    if k != rest:
        return None
    return [items[keep[i]][0] for i in found[0]]


# -- conjugate pairs over F_p^2 --------------------------------------------------
#
# A pair {A, conj(A)} of F_p^2-points spans the rational line through the real
# and imaginary parts of A's image, so membership of a rational point is a
# rank test over F_p.


def conjugate_pairs(emb):
    """``(reps, R, I)``: one point per conjugate pair and the parts of its image."""
    cache = getattr(emb, "_conj_cache", None)
    if cache is not None:
        return cache
    import numpy as np

    E = emb.base_change()
    K = E.field
    C = E.curve
    reps = []
    for x in K.elements():
        if K.is_base(x):
            # rational x: a conjugate pair iff f(x) is a non-residue
            if not emb.field.is_square(_f_at(emb, x[0])):
                reps.append(C.points_over(x)[0])
            continue
        if K.key(K.conj(x)) < K.key(x):
            continue
        reps.extend(C.points_over(x))
    R, I = [], []
    for pt in reps:
        v = E.eval_point(pt)
        R.append([c[0] for c in v])
        I.append([c[1] for c in v])
    n1 = emb.n + 1
    out = (reps, np.array(R, dtype=np.int64).reshape(-1, n1), np.array(I, dtype=np.int64).reshape(-1, n1))
    emb._conj_cache = out
    return out


def _f_at(emb, x):
    from ..algebra import poly

    return poly.evaluate(list(emb.curve.f), x, emb.field)


def conjugate_hits(emb, P):
    """Indices of conjugate pairs whose secant contains the rational point P."""
    import numpy as np

    F = emb.field
    reps, R, I = conjugate_pairs(emb)
    if not reps:
        return []
    ann = linalg.nullspace([list(P)], F, ncols=emb.n + 1)
    A = np.array(ann, dtype=np.int64)
    p = F.p
    wr = (R @ A.T) % p
    wi = (I @ A.T) % p
    # rank <= 1 of the 2 x n block  <=>  all 2x2 minors vanish
    minors = (wr[:, :, None] * wi[:, None, :] - wr[:, None, :] * wi[:, :, None]) % p
    hit = ~minors.reshape(len(reps), -1).any(axis=1)
    return [int(i) for i in np.flatnonzero(hit)]


def conjugate_pair_rank2(emb, P):
    """Certificate over F_p^2 for a rational P on the secant of a conjugate pair."""
    hits = conjugate_hits(emb, P)
    if not hits:
        return None
    E = emb.base_change()
    K = E.field
    A = conjugate_pairs(emb)[0][hits[0]]
    Abar = type(A)(K.conj(A.x), K.conj(A.y))
    PK = [K.lift(c) for c in P]
    return make_cert(emb, [PK], sorted([A, Abar]), K, scope=f"conjugate pair over {K.tag}")


def point_target(v, F):
    return normalize(list(v), F)
