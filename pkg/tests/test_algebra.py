from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from xrank.algebra import linalg, poly
from xrank.algebra.fields import FieldError, QQ, field_from_tag, prime_field, quadratic_field

P = prime_field(101)
K = quadratic_field(101)
FIELDS = [QQ, prime_field(23), P, K]


def elems(F):
    if F is QQ:
        return st.fractions(max_denominator=50).map(Fraction)
    if F.kind == "Fp":
        return st.integers(0, F.p - 1)
    return st.tuples(st.integers(0, F.p - 1), st.integers(0, F.p - 1))


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.tag)
def test_field_axioms(F):
    @given(elems(F), elems(F), elems(F))
    @settings(max_examples=60, deadline=None)
    def inner(a, b, c):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.sub(F.add(a, b), b) == a
        if not F.is_zero(b):
            assert F.mul(F.div(a, b), b) == a
        assert F.parse(F.fmt(a)) == a

    inner()


@pytest.mark.parametrize("F", [P, K], ids=lambda F: F.tag)
def test_sqrt(F):
    for a in list(F.elements())[:300]:
        r = F.sqrt(a)
        if r is None:
            assert not F.is_square(a)
        else:
            assert F.mul(r, r) == a


def test_field_tags():
    assert field_from_tag("Q") is QQ
    assert field_from_tag("Fp:101") is P
    assert field_from_tag("Fp2:101").tag == "Fp2:101"
    with pytest.raises(FieldError):
        prime_field(100)
    with pytest.raises(FieldError):
        prime_field(7)  # below the minimum
    with pytest.raises(FieldError):
        field_from_tag("GF(5)")


def test_rref_examples():
    F = prime_field(29)
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert linalg.rref(I3, F)[0] == I3
    Z = [[0] * 4, [0] * 4]
    assert linalg.rref(Z, F)[0] == Z and linalg.rank(Z, F) == 0
    assert linalg.rref([[2, 4], [1, 2]], F)[0] == [[1, 2], [0, 0]]


def _rref(m, F):
    return linalg.rref(m, F)[0]


@given(st.lists(st.lists(st.integers(0, 22), min_size=4, max_size=4), min_size=1, max_size=5))
@settings(max_examples=80, deadline=None)
def test_rref_idempotent(m):
    F = prime_field(23)
    r = _rref(m, F)
    assert _rref(r, F) == r
    assert linalg.rank(m, F) == linalg.rank(r, F)


def test_span_meet_contains():
    F = prime_field(23)
    a = linalg.subspace_span([[1, 0, 0], [0, 1, 0]], F)
    assert a.dim == 1
    assert linalg.subspace_span([[1, 2, 3]], F).dim == 0
    third = [F.add(1, F.mul(5, 0)), 5, 0]
    assert linalg.subspace_span([[1, 0, 0, 0], [0, 1, 0, 0], [1, 5, 0, 0]], F).dim == 1
    p1 = linalg.subspace_span([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]], F)
    p2 = linalg.subspace_span([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]], F)
    assert linalg.subspace_meet(p1, p2).dim == 1
    l1 = linalg.subspace_span([[1, 0, 0, 0], [0, 1, 0, 0]], F)
    l2 = linalg.subspace_span([[0, 0, 1, 0], [0, 0, 0, 1]], F)
    assert linalg.subspace_meet(l1, l2).is_empty
    empty = linalg.subspace_from_rows([], F, 3)
    assert not linalg.subspace_contains(empty, [1, 0, 0, 0])
    for row in a.basis:
        assert linalg.subspace_contains(a, list(row))
    assert linalg.subspace_contains(a, third)
    with pytest.raises(ValueError):
        linalg.subspace_meet(a, l1)


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_meet_dimension_bound(seed):
    import random

    F = prime_field(23)
    rng = random.Random(seed)
    n = 4
    da, db = rng.randint(1, 4), rng.randint(1, 4)
    A = linalg.subspace_span([[rng.randrange(23) for _ in range(n + 1)] for _ in range(da)], F, n)
    B = linalg.subspace_span([[rng.randrange(23) for _ in range(n + 1)] for _ in range(db)], F, n)
    if A.dim + B.dim >= n:
        assert linalg.subspace_meet(A, B).dim >= A.dim + B.dim - n


def test_squarefree_examples():
    F = prime_field(101)
    assert poly.squarefree_part(poly.parse("x^2", QQ), QQ) == ([Fraction(0), Fraction(1)], False)
    f = poly.parse("x^3-x", QQ)
    assert poly.squarefree_part(f, QQ)[1] is True
    g = poly.mul(poly.power([F.neg(1), 1], 2, F), [2, 1], F)
    part, sqf = poly.squarefree_part(g, F)
    assert not sqf and part == poly.mul([F.neg(1), 1], [2, 1], F)
    with pytest.raises(ValueError):
        poly.squarefree_part([], F)


def test_roots_examples():
    F = prime_field(23)
    pairs, res = poly.roots(poly.parse("x^2-1", F), F)
    assert pairs == [(1, 1), (22, 1)] and res == 0
    pairs, res = poly.roots(poly.parse("x^2+1", F), F)  # -1 is a non-residue mod 23
    assert pairs == [] and res == 2
    pairs, res = poly.roots(poly.parse("x^2-6*x+9", QQ), QQ)
    assert pairs == [(Fraction(3), 2)] and res == 0


@given(st.lists(st.integers(0, 100), min_size=2, max_size=8))
@settings(max_examples=60, deadline=None)
def test_roots_divide(coeffs):
    F = P
    f = poly.strip(coeffs, F)
    if poly.deg(f) < 1:
        return
    pairs, res = poly.roots(f, F)
    prod = [1]
    for r, m in pairs:
        prod = poly.mul(prod, poly.power([F.neg(r), 1], m, F), F)
    assert not poly.rem(f, prod, F)
    assert sum(m for _, m in pairs) + res == poly.deg(f)


@given(st.lists(st.integers(0, 100), min_size=2, max_size=7))
@settings(max_examples=60, deadline=None)
def test_squarefree_property(coeffs):
    f = poly.strip(coeffs, P)
    if poly.deg(f) < 1:
        return
    part, _ = poly.squarefree_part(f, P)
    assert not poly.rem(f, part, P)
    assert poly.squarefree_part(part, P)[1]


def test_poly_parse_fmt_roundtrip():
    for text in ["x^5-5*x^3+4*x", "3/2*x^2 - 1/3", "x^6+3"]:
        f = poly.parse(text, QQ)
        assert poly.parse(poly.fmt(f, QQ), QQ) == f
