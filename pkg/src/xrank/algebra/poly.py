"""Dense univariate polynomials as coefficient lists, lowest degree first.

The zero polynomial is ``[]``; every other polynomial has a nonzero last
entry.  All functions take the coefficient field ``F`` explicitly.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction



def strip(f, F):
    f = list(f)
    while f and F.is_zero(f[-1]):
        f.pop()
    return f


def deg(f):
    return len(f) - 1


def const(c, F):
    return strip([c], F)


def X(F):
    return [F.zero, F.one]


def add(f, g, F):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return strip(out, F)


def neg(f, F):
    return [F.neg(c) for c in f]


def sub(f, g, F):
    return add(f, neg(g, F), F)


def scale(f, c, F):
    if F.is_zero(c):
        return []
    return [F.mul(a, c) for a in f]


def mul(f, g, F):
    if not f or not g:
        return []
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return strip(out, F)


def power(f, e, F):
    result = [F.one]
    while e:
        if e & 1:
            result = mul(result, f, F)
        f = mul(f, f, F)
        e >>= 1
    return result


def divmod_(f, g, F):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = deg(g)
    inv_lc = F.inv(g[-1])
    q = [F.zero] * max(len(f) - dg, 0)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if F.is_zero(c):
            continue
        c = F.mul(c, inv_lc)
        q[k - dg] = c
        for j, b in enumerate(g):
            f[k - dg + j] = F.sub(f[k - dg + j], F.mul(c, b))
    return strip(q, F), strip(f[:dg], F)


def quo(f, g, F):
    return divmod_(f, g, F)[0]


def rem(f, g, F):
    return divmod_(f, g, F)[1]


def exquo(f, g, F):
    q, r = divmod_(f, g, F)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def monic(f, F):
    if not f:
        return []
    return scale(f, F.inv(f[-1]), F)


def gcd(f, g, F):
    while g:
        f, g = g, rem(f, g, F)
    return monic(f, F)


def xgcd(f, g, F):
    """Return ``(d, s, t)`` with ``d = s*f + t*g`` and ``d`` monic."""
    r0, r1 = f, g
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        q, r = divmod_(r0, r1, F)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, F), F)
        t0, t1 = t1, sub(t0, mul(q, t1, F), F)
    if not r0:
        return [], [], []
    c = F.inv(r0[-1])
    return scale(r0, c, F), scale(s0, c, F), scale(t0, c, F)


def deriv(f, F):
    return strip([F.mul(F(i), c) for i, c in enumerate(f)][1:], F)


def evaluate(f, x, F):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def compose(f, g, F):
    """f(g(x))."""
    acc = []
    for c in reversed(f):
        acc = add(mul(acc, g, F), const(c, F), F)
    return acc


def taylor_shift(f, a, F):
    """Coefficients of f(a + t) as a polynomial in t."""
    return compose(f, [a, F.one], F)


def from_roots(roots, F):
    out = [F.one]
    for r in roots:
        out = mul(out, [F.neg(r), F.one], F)
    return out


def powmod(f, e, m, F):
    result = [F.one]
    f = rem(f, m, F)
    while e:
        if e & 1:
            result = rem(mul(result, f, F), m, F)
        f = rem(mul(f, f, F), m, F)
        e >>= 1
    return result


def lift(f, K):
    """Map a polynomial over F_p into the extension field ``K``."""
    return [K.lift(c) for c in f]


def squarefree_part(f, F):
    """Return ``(f / gcd(f, f'), is_squarefree)``.

    Needs characteristic zero or larger than ``deg f``.
    """
    if not f:
        raise ValueError("zero polynomial has no squarefree part")
    if F.characteristic and F.characteristic <= deg(f):
        raise ValueError("characteristic too small for a derivative-based test")
    g = gcd(f, deriv(f, F), F)
    return quo(f, g, F), deg(g) == 0


def is_squarefree(f, F):
    return squarefree_part(f, F)[1]


def roots(f, F):
    """Ground-field roots with multiplicity.

    Returns ``(pairs, residual_degree)`` where ``pairs`` is a sorted list of
    ``(root, multiplicity)`` and ``residual_degree`` counts the roots that do
    not lie in ``F``.
    """
    if not f:
        raise ValueError("zero polynomial has every element as a root")
    if F.is_finite:
        distinct = _finite_field_roots(f, F)
    else:
        distinct = _rational_roots(f)
    pairs = []
    total = 0
    for r in sorted(distinct, key=F.key):
        rest, m = f, 0
        lin = [F.neg(r), F.one]
        while True:
            q, rmd = divmod_(rest, lin, F)
            if rmd:
                break
            rest, m = q, m + 1
        pairs.append((r, m))
        total += m
    return pairs, deg(f) - total


def _finite_field_roots(f, F):
    f = monic(f, F)
    if deg(f) <= 0:
        return []
    xq = powmod(X(F), F.order, f, F)
    g = gcd(f, sub(xq, X(F), F), F)
    out = []
    rng = random.Random(0)
    _split_linear(g, F, rng, out)
    return out


def _split_linear(g, F, rng, out):
    d = deg(g)
    if d <= 0:
        return
    if d == 1:
        out.append(F.neg(g[0]))
        return
    e = (F.order - 1) // 2
    while True:
        a = F.random(rng)
        h = powmod([a, F.one], e, g, F)
        h = gcd(g, sub(h, [F.one], F), F)
        if 0 < deg(h) < d:
            _split_linear(h, F, rng, out)
            _split_linear(quo(g, h, F), F, rng, out)
            return


def _rational_roots(f):
    from sympy import Poly, QQ as _SQ, Symbol

    p = Poly(list(reversed([Fraction(c) for c in f])), Symbol("t"), domain=_SQ)
    return [Fraction(int(r.p), int(r.q)) for r in p.ground_roots()]


# -- text form -------------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")
_COEF = re.compile(r"^(\d+(?:/\d+)?)\*?")


class PolyParseError(ValueError):
    pass


def parse_monomials(text, variables):
    """Parse ``c*x^i*y^j`` sums into ``{exponents: Fraction}``."""
    text = text.replace(" ", "")
    if not text:
        raise PolyParseError("empty polynomial")
    out = {}
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise PolyParseError(f"unexpected text at column {pos + 1}")
        pos = m.end()
        sign, body = m.group(1), m.group(2)
        coef = Fraction(1)
        cm = _COEF.match(body)
        if cm:
            coef = Fraction(cm.group(1))
            body = body[cm.end():]
        exps = [0] * len(variables)
        for factor in filter(None, body.split("*")):
            fm = re.fullmatch(r"([a-z])(?:\^(\d+))?", factor)
            if not fm or fm.group(1) not in variables:
                raise PolyParseError(f"bad factor {factor!r} in {text!r}")
            exps[variables.index(fm.group(1))] += int(fm.group(2) or 1)
        if sign == "-":
            coef = -coef
        key = tuple(exps)
        out[key] = out.get(key, Fraction(0)) + coef
    if pos != len(text):
        raise PolyParseError(f"unexpected text at column {pos + 1}")
    return {k: v for k, v in out.items() if v != 0}


def parse(text, F, var="x"):
    terms = parse_monomials(text, [var])
    n = max((k[0] for k in terms), default=-1)
    coeffs = [F.zero] * (n + 1)
    for (k,), c in terms.items():
        coeffs[k] = F.add(coeffs[k], F(c))
    return strip(coeffs, F)


def fmt(f, F, var="x"):
    if not f:
        return "0"
    parts = []
    for k in range(len(f) - 1, -1, -1):
        c = f[k]
        if F.is_zero(c):
            continue
        sign = "+"
        if F.kind == "Q" and c < 0:
            sign, c = "-", -c
        cs = F.fmt(c)
        if F.kind == "Fp2" and not F.is_base(c):
            cs = f"({cs})"
        if k == 0:
            term = cs
        else:
            mono = var if k == 1 else f"{var}^{k}"
            term = mono if c == F.one else f"{cs}*{mono}"
        parts.append((sign, term))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out
