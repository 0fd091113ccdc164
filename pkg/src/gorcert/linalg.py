"""Deterministic dense linear algebra over exact fields.

Matrices over a prime field are stored as numpy int64 arrays with entries
in [0, p); matrices over Q are lists of Fraction rows.  All reductions use
the same pivoting rule (first nonzero entry in column order), so every
canonical form is reproducible bit for bit across runs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .fields import FieldSpec


class LinAlgError(ValueError):
    pass


class ExactMatrix:
    """A dense matrix over one FieldSpec."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: FieldSpec, rows: int, cols: int, data):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data  # np.int64 2-D array, or list of lists of Fraction

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows, cols: int | None = None) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise LinAlgError("ragged rows")
        if field.kind == "prime":
            a = np.array(rows, dtype=np.int64).reshape(len(rows), cols) % field.p
            return cls(field, len(rows), cols, a)
        data = [[Fraction(x) for x in r] for r in rows]
        return cls(field, len(rows), cols, data)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "ExactMatrix":
        if field.kind == "prime":
            return cls(field, rows, cols, np.zeros((rows, cols), dtype=np.int64))
        return cls(field, rows, cols, [[Fraction(0)] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "ExactMatrix":
        if field.kind == "prime":
            return cls(field, n, n, np.eye(n, dtype=np.int64))
        data = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        return cls(field, n, n, data)

    # -- access -------------------------------------------------------

    def row(self, i):
        if self.field.kind == "prime":
            return self.data[i].copy()
        return list(self.data[i])

    def entry(self, i, j):
        if self.field.kind == "prime":
            return int(self.data[i][j])
        return self.data[i][j]

    def to_lists(self):
        if self.field.kind == "prime":
            return [[int(x) for x in r] for r in self.data]
        return [list(r) for r in self.data]

    def copy(self) -> "ExactMatrix":
        if self.field.kind == "prime":
            return ExactMatrix(self.field, self.rows, self.cols, self.data.copy())
        return ExactMatrix(self.field, self.rows, self.cols, [list(r) for r in self.data])

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.field != other.field or self.rows != other.rows or self.cols != other.cols:
            return False
        if self.field.kind == "prime":
            return bool(np.array_equal(self.data, other.data))
        return self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols))

    def __repr__(self):
        return "ExactMatrix(%r, %dx%d)" % (self.field, self.rows, self.cols)

    def is_zero(self) -> bool:
        if self.field.kind == "prime":
            return not self.data.any()
        return all(all(x == 0 for x in r) for r in self.data)

    # -- arithmetic ---------------------------------------------------

    def transpose(self) -> "ExactMatrix":
        if self.field.kind == "prime":
            return ExactMatrix(self.field, self.cols, self.rows, self.data.T.copy())
        data = [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        return ExactMatrix(self.field, self.cols, self.rows, data)

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise LinAlgError("shape mismatch in matmul")
        f = self.field
        if f.kind == "prime":
            a = self.data % f.p
            b = other.data % f.p
            if self.cols == 0:
                return ExactMatrix.zeros(f, self.rows, other.cols)
            if self.cols * (f.p - 1) ** 2 < 2**53:
                # products fit exactly in float64, so BLAS does the work
                acc = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % f.p
                return ExactMatrix(f, self.rows, other.cols, acc)
            # one int64 product is fine for p < 2**31; accumulate in blocks
            acc = np.zeros((self.rows, other.cols), dtype=np.int64)
            step = max(1, 2**62 // max(1, (f.p - 1) ** 2) - 1)
            for k0 in range(0, self.cols, step):
                acc = (acc + a[:, k0:k0 + step] @ b[k0:k0 + step]) % f.p
            return ExactMatrix(f, self.rows, other.cols, acc)
        out = [[Fraction(0)] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            ri = self.data[i]
            oi = out[i]
            for k in range(self.cols):
                x = ri[k]
                if x == 0:
                    continue
                rk = other.data[k]
                for j in range(other.cols):
                    if rk[j] != 0:
                        oi[j] += x * rk[j]
        return ExactMatrix(f, self.rows, other.cols, out)

    def add(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinAlgError("shape mismatch in add")
        if self.field.kind == "prime":
            return ExactMatrix(self.field, self.rows, self.cols, (self.data + other.data) % self.field.p)
        data = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        return ExactMatrix(self.field, self.rows, self.cols, data)

    def sub(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinAlgError("shape mismatch in sub")
        if self.field.kind == "prime":
            return ExactMatrix(self.field, self.rows, self.cols, (self.data - other.data) % self.field.p)
        data = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)]
        return ExactMatrix(self.field, self.rows, self.cols, data)

    def scale(self, c) -> "ExactMatrix":
        if self.field.kind == "prime":
            return ExactMatrix(self.field, self.rows, self.cols, (self.data * (c % self.field.p)) % self.field.p)
        data = [[c * x for x in r] for r in self.data]
        return ExactMatrix(self.field, self.rows, self.cols, data)

    def apply(self, vec):
        """Matrix times column vector, in the field's vector representation."""
        f = self.field
        if f.kind == "prime":
            v = np.asarray(vec, dtype=np.int64) % f.p
            if self.cols == 0:
                return np.zeros(self.rows, dtype=np.int64)
            return (self.data @ v) % f.p
        out = [Fraction(0)] * self.rows
        for i in range(self.rows):
            ri = self.data[i]
            acc = Fraction(0)
            for j, x in enumerate(vec):
                if x != 0 and ri[j] != 0:
                    acc += ri[j] * x
            out[i] = acc
        return out


def hstack(mats) -> ExactMatrix:
    mats = list(mats)
    f = mats[0].field
    rows = mats[0].rows
    if f.kind == "prime":
        data = np.hstack([m.data for m in mats]) if mats else np.zeros((rows, 0), dtype=np.int64)
        return ExactMatrix(f, rows, data.shape[1], data)
    data = [sum((list(m.data[i]) for m in mats), []) for i in range(rows)]
    return ExactMatrix(f, rows, sum(m.cols for m in mats), data)


def vstack(mats) -> ExactMatrix:
    mats = list(mats)
    f = mats[0].field
    cols = mats[0].cols
    if f.kind == "prime":
        data = np.vstack([m.data for m in mats])
        return ExactMatrix(f, data.shape[0], cols, data)
    data = []
    for m in mats:
        data.extend([list(r) for r in m.data])
    return ExactMatrix(f, len(data), cols, data)


# -- vectors ----------------------------------------------------------
#
# Vectors use the same scalar representation as matrix rows: numpy int64
# 1-D arrays over prime fields, lists of Fraction over Q.

def vzeros(field: FieldSpec, n: int):
    if field.kind == "prime":
        return np.zeros(n, dtype=np.int64)
    return [Fraction(0)] * n


def vunit(field: FieldSpec, n: int, i: int):
    v = vzeros(field, n)
    v[i] = field.one()
    return v


def vfrom(field: FieldSpec, entries):
    if field.kind == "prime":
        return np.array([int(x) for x in entries], dtype=np.int64) % field.p
    return [Fraction(x) for x in entries]


def _np(v):
    return v if isinstance(v, np.ndarray) else np.array([int(x) for x in v], dtype=np.int64)


def vcopy(field: FieldSpec, v):
    return _np(v).copy() if field.kind == "prime" else list(v)


def vadd(field: FieldSpec, a, b):
    if field.kind == "prime":
        return (_np(a) + _np(b)) % field.p
    return [x + y for x, y in zip(a, b)]


def vsub(field: FieldSpec, a, b):
    if field.kind == "prime":
        return (_np(a) - _np(b)) % field.p
    return [x - y for x, y in zip(a, b)]


def vscale(field: FieldSpec, c, v):
    if field.kind == "prime":
        return (_np(v) * (int(c) % field.p)) % field.p
    return [c * x for x in v]


def vis_zero(field: FieldSpec, v) -> bool:
    if field.kind == "prime":
        return not (_np(v) % field.p).any()
    return all(x == 0 for x in v)


def vnonzero_indices(field: FieldSpec, v):
    if field.kind == "prime":
        return [int(i) for i in np.nonzero(_np(v) % field.p)[0]]
    return [i for i, x in enumerate(v) if x != 0]


def veq(field: FieldSpec, a, b) -> bool:
    if field.kind == "prime":
        return bool(np.array_equal(_np(a) % field.p, _np(b) % field.p))
    return list(a) == list(b)


# -- row reduction ----------------------------------------------------

def _rref_prime_naive(a: np.ndarray, p: int):
    a = a % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a, len(pivots), pivots


_RREF_BLOCK = 64


def _rref_prime(a: np.ndarray, p: int):
    """Blocked Gauss-Jordan over GF(p).

    Pivot elimination below the diagonal is deferred and applied to the
    trailing block as a single matrix product; with entries in [0, p) and
    block width B, products are bounded by B*(p-1)^2, so when that fits in
    the 53-bit float64 mantissa the BLAS product is exact.  The result is
    the unique RREF, identical to the naive elimination.
    """
    B = _RREF_BLOCK
    if (p - 1) ** 2 * B >= 2**53:
        return _rref_prime_naive(a, p)
    a = a % p
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return a, 0, []
    pivots = []
    r = 0       # next pivot row
    rb = 0      # first pending pivot row; rows rb..r-1 are finished pivot rows
    L = np.zeros((rows, B), dtype=np.int64)  # multipliers vs pending pivot rows

    def flush():
        nonlocal rb
        k = r - rb
        if k and r < rows:
            lf = L[r:, :k]
            if lf.any():
                upd = np.rint(lf.astype(np.float64) @ a[rb:r, :].astype(np.float64)).astype(np.int64)
                a[r:, :] = (a[r:, :] - upd) % p
        L[:, :] = 0
        rb = r

    for c in range(cols):
        if r == rows:
            break
        k = r - rb
        colc = a[r:, c]
        if k:
            # refresh the candidate column against pending pivots
            colc = (colc - L[r:, :k] @ a[rb:r, c]) % p
        nz = np.nonzero(colc)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if k and L[i, :k].any():
            # bring the chosen pivot row fully up to date
            a[i] = (a[i] - L[i, :k] @ a[rb:r, :]) % p
            L[i, :k] = 0
        if i != r:
            a[[r, i]] = a[[i, r]]
            L[[r, i]] = L[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        # the pivot row now leads with 1, so the multiplier for each lower
        # row is just its refreshed entry in this column
        col_rest = a[r + 1:, c]
        if k:
            col_rest = (col_rest - L[r + 1:, :k] @ a[rb:r, c]) % p
        L[r + 1:, k] = col_rest
        pivots.append(c)
        r += 1
        if r - rb == B:
            flush()
    flush()

    # back substitution, also in blocks
    nr = len(pivots)
    for k1 in range(nr, 0, -B):
        k0 = max(0, k1 - B)
        for t in range(k1 - 1, k0, -1):
            c = pivots[t]
            colv = a[k0:t, c]
            idx = np.nonzero(colv)[0]
            if idx.size:
                a[k0 + idx, c:] = (a[k0 + idx, c:] - np.outer(colv[idx], a[t, c:])) % p
        if k0 > 0:
            cmin = pivots[k0]
            m = a[:k0, pivots[k0:k1]]
            if m.any():
                upd = np.rint(m.astype(np.float64) @ a[k0:k1, cmin:].astype(np.float64)).astype(np.int64)
                a[:k0, cmin:] = (a[:k0, cmin:] - upd) % p
    return a, len(pivots), pivots


def _rref_rational(rows_in):
    a = [list(r) for r in rows_in]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            a[r], a[pivot_row] = a[pivot_row], a[r]
        pv = a[r][c]
        if pv != 1:
            a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                ar = a[r]
                a[i] = [x - f * y for x, y in zip(a[i], ar)]
        pivots.append(c)
        r += 1
    return a, len(pivots), pivots


def rref(m: ExactMatrix, transform: bool = False):
    """Reduced row echelon form.

    Returns (R, rank, pivot_columns); with transform=True additionally
    returns an invertible T with T @ m == R (rows of T record the
    elementary operations).
    """
    f = m.field
    if transform:
        aug = hstack([m, ExactMatrix.identity(f, m.rows)])
        big, rank, piv_aug = rref(aug)
        # pivots may spill into the transform block only for zero rows
        pivots = [c for c in piv_aug if c < m.cols]
        rank = len(pivots)
        if f.kind == "prime":
            r = ExactMatrix(f, m.rows, m.cols, big.data[:, :m.cols].copy())
            t = ExactMatrix(f, m.rows, m.rows, big.data[:, m.cols:].copy())
        else:
            r = ExactMatrix(f, m.rows, m.cols, [row[:m.cols] for row in big.data])
            t = ExactMatrix(f, m.rows, m.rows, [row[m.cols:] for row in big.data])
        # rows beyond the rank of m may have been reduced using the
        # identity block; R itself is still the true RREF of m there (zero)
        return r, rank, pivots, t
    if f.kind == "prime":
        data, rank, pivots = _rref_prime(m.data.copy(), f.p)
        return ExactMatrix(f, m.rows, m.cols, data), rank, pivots
    if m.rows == 0:
        return m.copy(), 0, []
    data, rank, pivots = _rref_rational(m.data)
    return ExactMatrix(f, m.rows, m.cols, data), rank, pivots


def rank_of(m: ExactMatrix) -> int:
    return rref(m)[1]


def kernel_matrix(m: ExactMatrix) -> ExactMatrix:
    """A basis (in RREF) for the right kernel {x : m @ x = 0}."""
    f = m.field
    r, rank, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    rows = []
    for fc in free:
        v = vzeros(f, m.cols)
        v[fc] = f.one()
        for k, pc in enumerate(pivots):
            v[pc] = f.neg(r.entry(k, fc))
        rows.append(list(v))
    if not rows:
        return ExactMatrix.zeros(f, 0, m.cols)
    basis = ExactMatrix.from_rows(f, rows, m.cols)
    rr, _, _ = rref(basis)
    return rr


def solve(a: ExactMatrix, b: ExactMatrix):
    """Solve a @ x = b exactly.

    Returns (particular, kernel) where particular is an ExactMatrix with
    free variables set to zero, or None when the system is inconsistent.
    The kernel is a Subspace basis for the homogeneous solutions.
    """
    if a.rows != b.rows:
        raise LinAlgError("row counts of a and b disagree")
    f = a.field
    aug = hstack([a, b])
    r, rank, pivots = rref(aug)
    consistent = all(c < a.cols for c in pivots)
    ker = Subspace(a.cols, kernel_matrix(a))
    if not consistent:
        return None, ker
    x = ExactMatrix.zeros(f, a.cols, b.cols)
    for k, pc in enumerate(pivots):
        for j in range(b.cols):
            val = r.entry(k, a.cols + j)
            if f.kind == "prime":
                x.data[pc][j] = val
            else:
                x.data[pc][j] = val
    return x, ker


class Subspace:
    """A subspace of k^n held as a reduced-row-echelon basis.

    The canonical form makes equality of subspaces a literal comparison of
    the basis matrices.
    """

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, basis: ExactMatrix, pivots=None):
        self.ambient = ambient
        self.basis = basis
        if pivots is None:
            pivots = []
            for i in range(basis.rows):
                row = basis.row(i)
                nz = vnonzero_indices(basis.field, row)
                pivots.append(nz[0])
        self.pivots = list(pivots)

    @classmethod
    def from_vectors(cls, field: FieldSpec, ambient: int, vectors) -> "Subspace":
        vectors = [list(v) for v in vectors]
        if not vectors:
            return cls.zero(field, ambient)
        m = ExactMatrix.from_rows(field, vectors, ambient)
        r, rank, pivots = rref(m)
        if field.kind == "prime":
            basis = ExactMatrix(field, rank, ambient, r.data[:rank].copy())
        else:
            basis = ExactMatrix(field, rank, ambient, [row[:] for row in r.data[:rank]])
        return cls(ambient, basis, pivots)

    @classmethod
    def zero(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls(ambient, ExactMatrix.zeros(field, 0, ambient), [])

    @classmethod
    def full(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls(ambient, ExactMatrix.identity(field, ambient), list(range(ambient)))

    @property
    def field(self) -> FieldSpec:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.dim))

    def __repr__(self):
        return "Subspace(dim %d of k^%d)" % (self.dim, self.ambient)

    def reduce(self, vec):
        """Residual of vec after subtracting its projection onto the basis."""
        f = self.field
        v = vcopy(f, vec)
        for k, pc in enumerate(self.pivots):
            c = v[pc]
            if c != 0:
                v = vsub(f, v, vscale(f, c, self.basis.row(k)))
        return v

    def coordinates(self, vec):
        """Coordinates of vec in the basis, or None if not a member."""
        f = self.field
        v = vcopy(f, vec)
        coords = []
        for k, pc in enumerate(self.pivots):
            c = v[pc]
            coords.append(c)
            if c != 0:
                v = vsub(f, v, vscale(f, c, self.basis.row(k)))
        if not vis_zero(f, v):
            return None
        return vfrom(f, coords)

    def contains(self, vec) -> bool:
        return vis_zero(self.field, self.reduce(vec))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(other.basis.row(i)) for i in range(other.dim))

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise LinAlgError("ambient mismatch")
        if self.dim == 0:
            return other
        if other.dim == 0:
            return self
        rows = [self.basis.row(i) for i in range(self.dim)]
        rows += [other.basis.row(i) for i in range(other.dim)]
        return Subspace.from_vectors(self.field, self.ambient, rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise LinAlgError("ambient mismatch")
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        # x = u @ U = w @ V; solve [U^T | -V^T] (u; w) = 0
        ut = self.basis.transpose()
        vt = other.basis.transpose().scale(self.field.neg(self.field.one()))
        ker = kernel_matrix(hstack([ut, vt]))
        vecs = []
        for i in range(ker.rows):
            u = ker.row(i)[: self.dim]
            x = vzeros(self.field, self.ambient)
            for k, c in enumerate(u):
                if c != 0:
                    x = vadd(self.field, x, vscale(self.field, c, self.basis.row(k)))
            vecs.append(x)
        return Subspace.from_vectors(self.field, self.ambient, vecs)

    def quotient_dim(self, other: "Subspace") -> int:
        """dim(self / (self `intersect` other)); ambient quotient when other spans."""
        return self.dim - self.intersect(other).dim

    def quotient_map(self) -> ExactMatrix:
        """A matrix q: k^ambient -> k^(ambient - dim) with kernel exactly self.

        Coordinates are read off the non-pivot positions after reduction,
        so the map is deterministic for the canonical basis.
        """
        f = self.field
        nonpiv = [c for c in range(self.ambient) if c not in set(self.pivots)]
        q = ExactMatrix.zeros(f, len(nonpiv), self.ambient)
        for r, c in enumerate(nonpiv):
            if f.kind == "prime":
                q.data[r][c] = 1
            else:
                q.data[r][c] = Fraction(1)
        for k, pc in enumerate(self.pivots):
            row = self.basis.row(k)
            for r, c in enumerate(nonpiv):
                val = row[c]
                if val != 0:
                    q.data[r][pc] = f.neg(val)
        return q

    def complement_pivots(self):
        return [c for c in range(self.ambient) if c not in set(self.pivots)]
