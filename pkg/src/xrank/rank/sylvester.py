"""Waring rank of binary forms by Sylvester's catalecticant algorithm.

A form is stored by its coefficients c_i of x^i y^(n-i).  Internally the
scaled coefficients a_i = c_i / binom(n, i) are used, so the point of the
rational normal curve with parameter (a:b) is the vector (a^i b^(n-i)) and
the catalecticant is the plain Hankel matrix (a_(i+j)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb

from ..algebra import linalg, poly
from ..embedding import RationalNormalCurve
from .certs import make_cert


@dataclass(frozen=True)
class BinaryForm:
    field: object
    coeffs: tuple  # c_0..c_n, c_i multiplies x^i y^(n-i)

    @property
    def n(self):
        return len(self.coeffs) - 1

    @classmethod
    def parse(cls, text, F):
        terms = poly.parse_monomials(text, ["x", "y"])
        if not terms:
            raise ValueError("the zero form has no rank")
        degs = {i + j for i, j in terms}
        if len(degs) != 1:
            raise ValueError("binary form must be homogeneous")
        n = degs.pop()
        c = [F.zero] * (n + 1)
        for (i, _), v in terms.items():
            c[i] = F.add(c[i], F(v))
        if all(F.is_zero(x) for x in c):
            raise ValueError("the zero form has no rank")
        return cls(F, tuple(c))

    def scaled(self):
        F = self.field
        n = self.n
        if F.characteristic and F.characteristic <= n:
            raise ValueError("characteristic must exceed the degree")
        return [F.div(c, F(comb(n, i))) for i, c in enumerate(self.coeffs)]

    def fmt(self):
        F = self.field
        n = self.n
        parts = []
        for i in range(n, -1, -1):
            c = self.coeffs[i]
            if F.is_zero(c):
                continue
            mono = "*".join(m for m in (_pw("x", i), _pw("y", n - i)) if m)
            parts.append(f"{F.fmt(c)}*{mono}" if c != F.one else mono)
        return " + ".join(parts)


def _pw(v, k):
    return "" if k == 0 else (v if k == 1 else f"{v}^{k}")


def catalecticant(form, s):
    n = form.n
    if not 1 <= s <= n:
        raise ValueError(f"s must lie in [1, {n}]")
    a = form.scaled()
    return [[a[i + j] for j in range(n - s + 1)] for i in range(s + 1)]


def apolar_kernel(form, s):
    """Left kernel of the catalecticant: forms g with sum g_i a_(i+j) = 0 for all j."""
    F = form.field
    cat = catalecticant(form, s)
    return linalg.nullspace(linalg.transpose(cat), F, ncols=s + 1)


def border_rank_binary(form):
    for s in range(1, form.n + 1):
        if apolar_kernel(form, s):
            return s
    return form.n  # unreachable for nonzero forms


def kernel_roots(g, F):
    """Parameters (a:b) where g(a, b) = sum g_k a^k b^(s-k) vanishes.

    Returns ``(params, squarefree, split)``.
    """
    s = len(g) - 1
    G = poly.strip(list(g), F)
    if not G:
        raise ValueError("zero kernel form")
    inf_mult = s - poly.deg(G)
    pairs, residual = poly.roots(G, F) if poly.deg(G) > 0 else ([], 0)
    sqf = inf_mult <= 1 and (poly.deg(G) <= 0 or poly.is_squarefree(G, F))
    params = [(r, F.one) for r, _ in pairs]
    if inf_mult:
        params.append((F.one, F.zero))
    split = residual == 0
    return params, sqf, split


def _order_key(g, F):
    # minimal degree, then lexicographically least monic form (top coefficient first)
    G = poly.strip(list(g), F)
    Gm = poly.monic(G, F)
    return (poly.deg(G), [F.key(c) for c in reversed(Gm)])


def _small_values(F, k):
    out = [F.zero]
    for i in range(1, k):
        out += [F.neg(F(i)), F(i)]
    return out


def _candidates(basis, F, limit):
    """Kernel elements in a fixed deterministic order."""
    import itertools

    basis = sorted(basis, key=lambda g: _order_key(g, F))
    yield from basis
    vals = _small_values(F, 3)
    count = 0
    for coeffs in itertools.product(vals, repeat=len(basis) - 1):
        g = list(basis[-1])
        for c, b in zip(coeffs, basis[:-1]):
            g = [F.add(x, F.mul(c, y)) for x, y in zip(g, b)]
        yield g
        count += 1
        if count >= limit:
            return


def _decompose(form, params):
    """lambda_j with F = sum lambda_j (a_j x + b_j y)^n, or None."""
    F = form.field
    rnc = RationalNormalCurve(form.n, F)
    cols = linalg.transpose([list(rnc.eval_point(t)) for t in params])
    return linalg.solve(cols, form.scaled(), F)


@dataclass
class SylvesterResult:
    form: BinaryForm
    rank: int
    border_rank: int
    kernel_form: list
    squarefree: bool
    witness: list | None  # parameters (a:b)
    lambdas: list | None
    cert: object | None
    note: str

    def summary(self):
        F = self.form.field
        s, n = self.border_rank, self.form.n
        d = {
            "form": self.form.fmt(),
            "field": F.tag,
            "degree": n,
            "border_rank": s,
            "rank": self.rank,
            "alternatives": sorted({s, n - s + 2}),
            "kernel_form": [F.fmt(c) for c in self.kernel_form],
            "kernel_squarefree": self.squarefree,
            "tag": "decomposition" if self.witness is not None else "dichotomy",
            "note": self.note,
        }
        if self.witness is not None:
            d["witness"] = [f"({F.fmt(a)}:{F.fmt(b)})" for a, b in self.witness]
            d["lambdas"] = [F.fmt(c) for c in self.lambdas]
        return d


def sylvester_rank(form, seed=0, tries=2000):
    F = form.field
    n = form.n
    s = border_rank_binary(form)
    ker = apolar_kernel(form, s)
    if len(ker) > 1:
        # only at s = n/2 + 1, where both branches of the dichotomy agree
        g = min(ker, key=lambda v: _order_key(v, F))
        _, sqf, _ = kernel_roots(g, F)
        rank = s
        for cand in _candidates(ker, F, tries):
            if not poly.strip(cand, F):
                continue
            params, ok, split = kernel_roots(cand, F)
            if ok and split and len(params) == s:
                lam = _decompose(form, params)
                if lam is not None:
                    return _result(form, rank, s, g, sqf, params, lam, "minimal-degree kernel element reported")
        return _result(form, rank, s, g, sqf, None, None, "no split squarefree kernel element found in the deterministic scan")
    g = ker[0]
    params, sqf, split = kernel_roots(g, F)
    if sqf:
        if split:
            lam = _decompose(form, params)
            return _result(form, s, s, g, sqf, params, lam, "kernel form squarefree and split")
        return _result(form, s, s, g, sqf, None, None, f"kernel form squarefree but not split over {F.tag}")
    r = n - s + 2
    found = _split_kernel_element(form, r, seed, tries)
    if found is not None:
        params, lam = found
        return _result(form, r, s, g, sqf, params, lam, "kernel form has a repeated root")
    return _result(form, r, s, g, sqf, None, None, f"kernel form has a repeated root; no split decomposition of size {r} found over {F.tag}")


def _split_kernel_element(form, r, seed, tries):
    F = form.field
    if r > form.n:
        return None
    ker = apolar_kernel(form, r)
    if not ker:
        return None
    rng = random.Random(seed)
    for _ in range(tries):
        if F.is_finite:
            coeffs = [F.random(rng) for _ in ker]
        else:
            coeffs = [F(rng.randint(-5, 5)) for _ in ker]
        g = [F.sum(F.mul(c, v[i]) for c, v in zip(coeffs, ker)) for i in range(r + 1)]
        if not poly.strip(g, F):
            continue
        params, ok, split = kernel_roots(g, F)
        if ok and split and len(params) == r:
            lam = _decompose(form, params)
            if lam is not None and all(not F.is_zero(c) for c in lam):
                return params, lam
    return None


def _result(form, rank, s, g, sqf, params, lam, note):
    cert = None
    F = form.field
    if params is not None:
        keep = [(t, c) for t, c in zip(params, lam) if not F.is_zero(c)]
        params, lam = [t for t, _ in keep], [c for _, c in keep]
        rnc = RationalNormalCurve(form.n, F)
        target = linalg.normalize(form.scaled(), F)
        if len(params) == rank:
            cert = make_cert(rnc, [target], params, F, kind="exact", scope="closure rank by the catalecticant; witness over " + F.tag)
    return SylvesterResult(form, rank, s, list(g), sqf, params, lam, cert, note)


def exhaustive_form_rank(form, r_max):
    """Oracle: least rational decomposition on the rational normal curve over F_p."""
    from . import kernel

    F = form.field
    rnc = RationalNormalCurve(form.n, F)
    items = rnc.rational_images()
    target = linalg.normalize(form.scaled(), F)
    k, found = kernel.search([v for _, v in items], [target], F.p, r_max)
    if k is None:
        return None, None
    return k, [items[i][0] for i in found[0]]
