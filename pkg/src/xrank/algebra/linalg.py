"""Exact linear algebra and projective subspaces.

Matrices are lists of rows.  A :class:`ProjSubspace` stores its basis in
reduced row-echelon form, so two subspaces are equal iff their bases are.
"""

from __future__ import annotations

from dataclasses import dataclass


def rref(m, F):
    """Reduced row-echelon form of ``m``; returns ``(rows, pivot_columns)``.

    Zero rows are kept at the bottom so the shape is preserved.
    """
    rows = [list(r) for r in m]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not F.is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, a) for a in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and not F.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m, F):
    return len(rref(m, F)[1])


def row_basis(m, F):
    rows, piv = rref(m, F)
    return [tuple(r) for r in rows[: len(piv)]]


def nullspace(m, F, ncols=None):
    """Basis of ``{v : m v = 0}`` (right kernel)."""
    if not m:
        n = ncols or 0
        return [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    ncols = len(m[0])
    rows, piv = rref(m, F)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [F.zero] * ncols
        v[fc] = F.one
        for i, pc in enumerate(piv):
            v[pc] = F.neg(rows[i][fc])
        basis.append(v)
    return basis


def transpose(m):
    return [list(c) for c in zip(*m)]


def matvec(m, v, F):
    return [F.dot(row, v) for row in m]


def solve(m, b, F):
    """One solution of ``m x = b`` or None."""
    aug = [list(r) + [bi] for r, bi in zip(m, b)]
    rows, piv = rref(aug, F)
    ncols = len(m[0])
    if ncols in piv:
        return None
    x = [F.zero] * ncols
    for i, pc in enumerate(piv):
        x[pc] = rows[i][ncols]
    return x


# -- projective geometry -----------------------------------------------------


def normalize(v, F):
    """Scale so the first nonzero coordinate is 1."""
    for c in v:
        if not F.is_zero(c):
            inv = F.inv(c)
            return tuple(F.mul(inv, a) for a in v)
    raise ValueError("the zero vector is not a projective point")


def proj_point(coords, F):
    return normalize(list(coords), F)


@dataclass(frozen=True)
class ProjSubspace:
    """Projective linear subspace of P^n with an RREF row basis."""

    field: object
    ambient_dim: int
    basis: tuple

    @property
    def dim(self):
        return len(self.basis) - 1

    @property
    def is_empty(self):
        return not self.basis

    def __contains__(self, point):
        return subspace_contains(self, point)

    def annihilator(self):
        """Linear forms vanishing on the subspace (rows)."""
        return nullspace(list(self.basis), self.field, ncols=self.ambient_dim + 1)

    def point(self):
        if self.dim != 0:
            raise ValueError(f"subspace has dimension {self.dim}, not a point")
        return self.basis[0]


def subspace_from_rows(rows, F, ambient_dim):
    rows = list(rows)
    for r in rows:
        if len(r) != ambient_dim + 1:
            raise ValueError("mixed ambient dimensions")
    return ProjSubspace(F, ambient_dim, tuple(row_basis(rows, F)) if rows else ())


def subspace_span(points, F, ambient_dim=None):
    points = list(points)
    if ambient_dim is None:
        if not points:
            raise ValueError("ambient dimension needed for an empty span")
        ambient_dim = len(points[0]) - 1
    return subspace_from_rows(points, F, ambient_dim)


def subspace_join(a, b):
    _check_same(a, b)
    return subspace_from_rows(list(a.basis) + list(b.basis), a.field, a.ambient_dim)


def subspace_meet(a, b):
    """Exact intersection of two subspaces."""
    _check_same(a, b)
    F = a.field
    if a.is_empty or b.is_empty:
        return ProjSubspace(F, a.ambient_dim, ())
    stacked = list(a.basis) + list(b.basis)
    # left kernel: coefficient vectors (x, y) with x A + y B = 0
    kernel = nullspace(transpose(stacked), F)
    ka = len(a.basis)
    pts = []
    for vec in kernel:
        x = vec[:ka]
        pts.append([F.dot(x, col) for col in zip(*a.basis)])
    return subspace_from_rows(pts, F, a.ambient_dim)


def subspace_contains(s, p):
    if len(p) != s.ambient_dim + 1:
        raise ValueError("mixed ambient dimensions")
    if s.is_empty:
        return False
    F = s.field
    return rank(list(s.basis) + [list(p)], F) == len(s.basis)


def _check_same(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("mixed ambient dimensions")
