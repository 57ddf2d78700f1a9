"""Minimal spanning-subset search over F_p with numpy.

Given point images ``v_1..v_N`` in F_p^(n+1) and a target subspace T of
vector dimension m, find the least k and the lexicographically least index
set S with |S| = k and T inside span(v_S).

Work happens in the quotient by T: with ``w_i = v_i mod T``,
T lies in span(v_S) iff rank(v_S) - rank(w_S) = m.  A depth-first search
adds points in increasing index order, eliminating each added point from the
reduced copies of v and w.  A point whose reduced w vanishes contributes one
"drop"; the last two slots are resolved at once by looking for repeated
(projectively normalised) rows.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..algebra import linalg


def worker_count():
    env = os.environ.get("CURVE_RANK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return os.cpu_count() or 1


class _Ctx:
    def __init__(self, p, V, W, m):
        self.p = p
        self.V = V
        self.W = W
        self.m = m
        self.inv = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
        c = W.shape[1]
        self.radix = None
        if c and p ** c < 2**62:
            self.radix = np.array([p**i for i in range(c)], dtype=np.int64)


def _pivot(M, i, p, inv):
    row = M[i]
    nz = np.flatnonzero(row)
    c0 = nz[0]
    factor = (M[:, c0] * inv[row[c0]]) % p
    return (M - np.outer(factor, row)) % p


def _keys(ctx, rows):
    """Projective keys of nonzero rows (normalised by the first nonzero entry)."""
    p = ctx.p
    first = np.argmax(rows != 0, axis=1)
    lead = rows[np.arange(rows.shape[0]), first]
    normed = (rows * ctx.inv[lead][:, None]) % p
    if ctx.radix is not None:
        return normed @ ctx.radix
    _, inv = np.unique(normed, axis=0, return_inverse=True)
    return inv.ravel()


def _leaf2(ctx, W, V, start, need, emit):
    N = W.shape[0]
    idx = np.arange(start, N)
    if idx.size < 2:
        return False
    vnz = V[start:].any(axis=1)
    wnz = W[start:].any(axis=1)
    if need == 2:
        cand = idx[vnz & ~wnz]
        for x in range(cand.size):
            a = int(cand[x])
            Va = _pivot(V, a, ctx.p, ctx.inv)
            for y in range(x + 1, cand.size):
                b = int(cand[y])
                if Va[b].any() and emit(a, b):
                    return True
        return False
    sel = vnz & wnz
    cand = idx[sel]
    if cand.size < 2:
        return False
    keys = _keys(ctx, W[cand])
    _, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    dup = counts[inverse.ravel()] >= 2
    if not dup.any():
        return False
    cand, keys = cand[dup], keys[dup]
    for x in range(cand.size):
        a = int(cand[x])
        Va = None
        for y in range(x + 1, cand.size):
            if keys[y] != keys[x]:
                continue
            b = int(cand[y])
            if Va is None:
                Va = _pivot(V, a, ctx.p, ctx.inv)
            if Va[b].any() and emit(a, b):
                return True
    return False


def _leaf1(ctx, W, V, start, emit):
    sel = V[start:].any(axis=1) & ~W[start:].any(axis=1)
    for a in np.flatnonzero(sel):
        if emit(int(a) + start):
            return True
    return False


def _dfs(ctx, k, prefix, W, V, drops, start, stop, on_found):
    rem = k - len(prefix)
    need = ctx.m - drops
    if need > rem or need <= 0:
        return False
    if rem == 1:
        return _leaf1(ctx, W, V, start, lambda a: on_found(prefix + (a,)))
    if rem == 2:
        return _leaf2(ctx, W, V, start, need, lambda a, b: on_found(prefix + (a, b)))
    N = W.shape[0]
    vnz = V.any(axis=1)
    wnz = W.any(axis=1)
    end = N - rem + 1 if stop is None else min(stop, N - rem + 1)
    for i in range(start, end):
        if not vnz[i]:
            continue
        if wnz[i]:
            W2 = _pivot(W, i, ctx.p, ctx.inv)
            d2 = drops
        else:
            W2 = W
            d2 = drops + 1
            if d2 >= ctx.m:
                continue  # would already contain T at a smaller size
        V2 = _pivot(V, i, ctx.p, ctx.inv)
        if _dfs(ctx, k, prefix + (i,), W2, V2, d2, i + 1, None, on_found):
            return True
    return False


def _run_range(args):
    p, V, W, m, k, lo, hi, find_all = args
    ctx = _Ctx(p, V, W, m)
    found = []

    def on_found(s):
        found.append(s)
        return not find_all

    if k <= 2:
        if lo == 0:
            _dfs(ctx, k, (), W, V, 0, 0, None, on_found)
        return found
    # restrict the first index to [lo, hi)
    N = W.shape[0]
    vnz = V.any(axis=1)
    wnz = W.any(axis=1)
    for i in range(lo, min(hi, N)):
        if not vnz[i]:
            continue
        if wnz[i]:
            W2, d2 = _pivot(W, i, p, ctx.inv), 0
        else:
            if m <= 1:
                continue
            W2, d2 = W, 1
        V2 = _pivot(V, i, p, ctx.inv)
        if _dfs(ctx, k, (i,), W2, V2, d2, i + 1, None, on_found) and not find_all:
            break
    return found


def prepare(images, target_rows, p):
    """Arrays ``(V, W, m)`` for point images and a target given by row vectors."""
    from ..algebra.fields import prime_field

    F = prime_field(p)
    basis = linalg.row_basis([list(r) for r in target_rows], F)
    m = len(basis)
    ncols = len(images[0])
    ann = linalg.nullspace([list(b) for b in basis], F, ncols=ncols) if basis else linalg.nullspace([], F, ncols=ncols)
    V = np.array([list(v) for v in images], dtype=np.int64) % p
    A = np.array(ann, dtype=np.int64).reshape(len(ann), ncols) % p
    W = (V @ A.T) % p if len(ann) else np.zeros((len(images), 0), dtype=np.int64)
    return V, W, m


def search(images, target_rows, p, kmax, kmin=1, find_all=False, workers=None):
    """Least k in [kmin, kmax] and witness index tuples (lexicographic order).

    Returns ``(k, [tuples])``; ``(None, [])`` if nothing of size <= kmax.
    """
    if not images:
        return None, []
    V, W, m = prepare(images, target_rows, p)
    if m == 0:
        return None, []
    workers = worker_count() if workers is None else workers
    N = V.shape[0]
    for k in range(max(kmin, m), kmax + 1):
        if k > N:
            break
        found = _search_k(p, V, W, m, k, find_all, workers)
        if found:
            return k, found
    return None, []


def _search_k(p, V, W, m, k, find_all, workers):
    N = V.shape[0]
    if workers <= 1 or k <= 3 or N < 16:
        return _run_range((p, V, W, m, k, 0, N, find_all))
    # cut the first index into chunks of roughly equal work (C(N - i, k - 1))
    from math import comb

    weights = [comb(N - i - 1, k - 1) for i in range(N)]
    total = sum(weights)
    chunks = []
    lo, acc = 0, 0
    target = total / (workers * 4)
    for i, w in enumerate(weights):
        acc += w
        if acc >= target:
            chunks.append((lo, i + 1))
            lo, acc = i + 1, 0
    if lo < N:
        chunks.append((lo, N))
    jobs = [(p, V, W, m, k, a, b, find_all) for a, b in chunks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(_run_range, jobs))
    out = []
    for res in results:
        if res and not find_all:
            return res[:1]  # chunks are in index order, so the first hit is least
        out.extend(res)
    return sorted(out)
