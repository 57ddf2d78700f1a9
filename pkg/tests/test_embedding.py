import random

import pytest

from xrank.algebra import linalg
from xrank.algebra.fields import prime_field
from xrank.curves.jacobian import linearly_equivalent
from xrank.curves.model import CrvPoint, Divisor
from xrank.embedding import EmbeddingError, RationalNormalCurve, embed
from xrank.verify import default_divisor


@pytest.fixture(scope="module")
def pts(C101):
    return [p for p in C101.enumerate_points() if not C101.is_weierstrass(p)]


def test_embed_dimensions(C101):
    K = C101.canonical_divisor()
    rng = random.Random(0)
    for deg, n in ((5, 3), (6, 4), (10, 8)):
        assert embed(C101, default_divisor(C101, deg, rng)).n == n
    with pytest.raises(EmbeddingError):
        embed(C101, K + Divisor.point(CrvPoint(0, 0), 2))


def test_images_injective_and_spanning(C101, pts):
    e = embed(C101, C101.canonical_divisor() + Divisor.point(pts[0], 3))
    imgs = [tuple(v) for _, v in e.rational_images()]
    assert len(set(imgs)) == len(imgs)
    assert linalg.rank([list(v) for v in imgs], e.field) == e.n + 1
    rng = random.Random(4)
    for _ in range(10):
        sub = rng.sample(imgs, e.n + 2)
        assert linalg.rank([list(v) for v in sub], e.field) == e.n + 1


def test_spans_and_tangents(C101, pts):
    O = pts[0]
    e = embed(C101, C101.canonical_divisor() + Divisor.point(O, 3))
    F = e.field
    assert e.divisor_span(Divisor.point(pts[5], 1)).dim == 0
    for q in pts[:10]:
        T = e.tangent_line(q)
        assert T.dim == 1
        assert linalg.subspace_contains(T, e.eval_point(q))
    # T_Q meets X in 3Q
    T = e.tangent_line(O)
    assert e.divisor_span(Divisor.point(O, 3)) == T
    assert e.divisor_span(Divisor.point(O, 4)).dim == 2
    for c in T.annihilator():
        D, residual = e.hyperplane_divisor(c)
        assert D[O] >= 3 and D.degree + residual == 5


def test_span_dimensions_of_fat_points(C61):
    rng = random.Random(7)
    C = C61
    D = default_divisor(C, 10, rng)
    e = embed(C, D)
    pool = [p for p in C.enumerate_points() if not p.is_infinite]
    for _ in range(15):
        k = rng.randint(1, e.n - 1)
        Z = Divisor({})
        while Z.degree < k:
            Z = Z + Divisor.point(rng.choice(pool), 1)
        assert e.divisor_span(Z).dim == Z.degree - 1


def test_hyperplane_sections(C101, pts):
    rng = random.Random(9)
    D = default_divisor(C101, 6, rng)
    e = embed(C101, D)
    F = e.field
    for _ in range(10):
        c = [F.random(rng) for _ in range(e.n + 1)]
        if not any(c):
            continue
        H, residual = e.hyperplane_divisor(c)
        assert H.degree + residual == e.n + 2
        if residual == 0:
            assert linearly_equivalent(C101, H, D)
    # hyperplanes through a tangent line contain 2Q
    q = pts[3]
    for c in e.tangent_line(q).annihilator():
        H, _ = e.hyperplane_divisor(c)
        assert H[q] >= 2
    assert len(e.tangent_line(q).annihilator()) == e.n - 1


def test_projection(C101, pts):
    rng = random.Random(2)
    e = embed(C101, default_divisor(C101, 6, rng))
    F = e.field
    T = e.tangent_line(pts[0])
    # from a point P of T_Q other than Q the curve projects into P^3 with no skipped point
    Qv = list(e.eval_point(pts[0]))
    P = linalg.normalize([F.add(a, F.mul(3, b)) for a, b in zip(*T.basis)], F)
    assert P != Qv
    center = linalg.subspace_span([P], F, e.n)
    imgs, skipped = e.project(center)
    assert not skipped
    assert all(len(v) == e.n for v in imgs.values())


def test_quadrics(C101, F101):
    rng = random.Random(5)
    e = embed(C101, default_divisor(C101, 6, rng))
    assert e.quadric_space_dim() >= 4
    assert RationalNormalCurve(3, F101).quadric_space_dim() == 3


def test_coords_and_base_change(C101, pts):
    e = embed(C101, C101.canonical_divisor() + Divisor.point(pts[0], 3))
    for i, h in enumerate(e.basis):
        c = e.coords_of(h)
        assert c == [1 if j == i else 0 for j in range(e.n + 1)]
    E = e.base_change()
    K = E.field
    for pt, v in e.rational_images()[:10]:
        assert list(E.eval_point(C101.lift_point(pt))) == [K.lift(a) for a in v]


def test_manifest_rebuilds(C101, pts):
    from xrank.rank.certs import embedding_from_manifest

    e = embed(C101, C101.canonical_divisor() + Divisor.point(pts[0], 3))
    e2 = embedding_from_manifest(e.manifest())
    assert e2.rational_images() == e.rational_images()
