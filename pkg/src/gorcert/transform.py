"""Linear coordinate changes on the truncated polynomial ring.

A change of basis of [P]_1 extends multiplicatively to every degree; the
degree-d matrix expresses monomials in the new generators in the old
coordinates.  Ideals transform by rewriting their per-degree bases in the
new coordinates, so downstream code can assume the distinguished variables
are literal ring variables.
"""

from __future__ import annotations

from .linalg import (ExactMatrix, Subspace, solve, rref, vis_zero)
from .rings import GradedRing, QuotientAlgebra, build_quotient
from .ideals import HomogeneousIdeal


class CoordinateChange:
    """Rewrite data for a new basis g_1..g_n of [P]_1.

    new_basis is an n x n ExactMatrix whose columns are the new generators
    in old coordinates.  to_new(d) maps old degree-d coordinates to
    coordinates with respect to the monomials in g_1..g_n.
    """

    def __init__(self, ring: GradedRing, new_basis: ExactMatrix):
        if new_basis.rows != ring.n or new_basis.cols != ring.n:
            raise ValueError("basis matrix must be n x n")
        if rref(new_basis)[1] != ring.n:
            raise ValueError("new basis is singular")
        self.ring = ring
        self.new_basis = new_basis
        self._expand = {}   # d -> matrix: new-monomial coords -> old coords
        self._to_new = {}

    def _expansion(self, d: int) -> ExactMatrix:
        hit = self._expand.get(d)
        if hit is not None:
            return hit
        ring = self.ring
        f = ring.field
        if d == 0:
            m = ExactMatrix.identity(f, 1)
        elif d == 1:
            m = self.new_basis
        else:
            prev = self._expansion(d - 1)
            monos_d = ring.monomials(d)
            monos_prev = ring.monomials(d - 1)
            prev_index = {mo: i for i, mo in enumerate(monos_prev)}
            m = ExactMatrix.zeros(f, ring.dim(d), ring.dim(d))
            for j, mono in enumerate(monos_d):
                v = next(i for i, a in enumerate(mono) if a)
                rest = tuple(a - 1 if i == v else a for i, a in enumerate(mono))
                prev_col = _col(prev, prev_index[rest])
                gcol = _col(self.new_basis, v)
                prod = ring.multiply(gcol, 1, prev_col, d - 1)
                _set_col(m, j, prod)
        self._expand[d] = m
        return m

    def to_new(self, d: int, vec):
        """Coordinates of a degree-d element w.r.t. new-basis monomials."""
        m = self._expansion(d)
        b = ExactMatrix.from_rows(self.ring.field, [[x] for x in vec], 1)
        x, _ = solve(m, b)
        if x is None:
            raise AssertionError("expansion matrix is singular")
        return [x.entry(i, 0) for i in range(m.cols)]

    def to_old(self, d: int, vec):
        return self._expansion(d).apply(vec)

    def transform_subspace(self, d: int, sub: Subspace) -> Subspace:
        vecs = [self.to_new(d, sub.basis.row(i)) for i in range(sub.dim)]
        return Subspace.from_vectors(self.ring.field, self.ring.dim(d), vecs)

    def transform_pieces(self, pieces):
        return [self.transform_subspace(d, p) for d, p in enumerate(pieces)]

    def transform_algebra(self, S: QuotientAlgebra) -> QuotientAlgebra:
        return build_quotient(self.ring, self.transform_pieces(S.ideal_pieces))

    def to_json(self):
        f = self.ring.field
        return [[f.scalar_str(self.new_basis.entry(i, j)) for j in range(self.ring.n)]
                for i in range(self.ring.n)]


def _col(m: ExactMatrix, j: int):
    if m.field.kind == "prime":
        return m.data[:, j].copy()
    return [m.data[i][j] for i in range(m.rows)]


def _set_col(m: ExactMatrix, j: int, vec):
    if m.field.kind == "prime":
        m.data[:, j] = vec
    else:
        for i, x in enumerate(vec):
            m.data[i][j] = x


def basis_through_subspace(field, n: int, span_vectors, prefer_first=None):
    """A deterministic basis of k^n whose first vectors span the given
    subspace; completed by unit vectors at the non-pivot coordinates.

    prefer_first: optional list of vectors to try to lead the complement.
    """
    sub = Subspace.from_vectors(field, n, [list(v) for v in span_vectors])
    rows = [sub.basis.row(i) for i in range(sub.dim)]
    comp = []
    have = sub
    if prefer_first:
        for v in prefer_first:
            if not have.contains(v):
                comp.append(list(v))
                have = have.sum(Subspace.from_vectors(field, n, [list(v)]))
    for c in range(n):
        if have.dim == n:
            break
        from .linalg import vunit
        e = vunit(field, n, c)
        if not have.contains(e):
            comp.append(list(e))
            have = have.sum(Subspace.from_vectors(field, n, [list(e)]))
    return rows + comp
