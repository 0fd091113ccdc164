"""Truncated standard-graded polynomial rings and their Artinian quotients.

A GradedRing is P = k[X_1..X_n] known through degree `trunc`, with the
monomials of each degree listed in graded-lex order (X_1 > ... > X_n).  A
QuotientAlgebra S = P/A stores, per degree, a canonical reduced basis of
[A]_d; coset representatives are the non-pivot monomials, which makes all
downstream bases deterministic.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .fields import FieldSpec
from .linalg import (ExactMatrix, Subspace, vzeros, vfrom, vcopy, vadd,
                     vscale, vis_zero, vnonzero_indices, rref, vstack,
                     kernel_matrix, solve as _solve, _np)


def _coerce_vec(field: FieldSpec, v):
    if field.kind == "prime":
        return _np(v) % field.p
    from fractions import Fraction
    return [x if isinstance(x, Fraction) else Fraction(x) for x in v]


class TruncationError(ValueError):
    """The truncation degree is too small to certify the computation."""


class DegreeRangeError(ValueError):
    """A degree outside the certified range was requested."""


def _monomials(n: int, d: int):
    if n == 1:
        return [(d,)]
    out = []
    for a in range(d, -1, -1):
        for rest in _monomials(n - 1, d - a):
            out.append((a,) + rest)
    return out


def mono_mul(m1, m2):
    return tuple(a + b for a, b in zip(m1, m2))


def mono_divides(m1, m2) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def mono_div(m2, m1):
    return tuple(b - a for a, b in zip(m1, m2))


def mono_str(mono, names) -> str:
    parts = []
    for e, name in zip(mono, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"


class GradedRing:
    """k[X_1..X_n] truncated at a fixed top degree."""

    def __init__(self, field: FieldSpec, names, trunc: int):
        self.field = field
        self.names = tuple(names)
        self.n = len(self.names)
        if self.n < 1:
            raise ValueError("need at least one variable")
        if len(set(self.names)) != self.n:
            raise ValueError("duplicate variable names")
        self.trunc = trunc
        self._monos = {}
        self._index = {}
        self._shift = {}

    def monomials(self, d: int):
        if d < 0:
            return []
        if d > self.trunc:
            raise DegreeRangeError("degree %d beyond truncation %d" % (d, self.trunc))
        if d not in self._monos:
            ms = _monomials(self.n, d)
            self._monos[d] = ms
            self._index[d] = {m: i for i, m in enumerate(ms)}
        return self._monos[d]

    def dim(self, d: int) -> int:
        if d < 0:
            return 0
        if d > self.trunc:
            raise DegreeRangeError("degree %d beyond truncation %d" % (d, self.trunc))
        return comb(self.n - 1 + d, d)

    def index_of(self, mono) -> int:
        d = sum(mono)
        self.monomials(d)
        return self._index[d][mono]

    def mono_shift(self, mono, d: int):
        """Index map of multiplication by `mono`: degree d -> d + |mono|."""
        key = (mono, d)
        hit = self._shift.get(key)
        if hit is not None:
            return hit
        e = sum(mono)
        self.monomials(d + e)
        idx = self._index[d + e]
        arr = [idx[mono_mul(m, mono)] for m in self.monomials(d)]
        if self.field.kind == "prime":
            arr = np.array(arr, dtype=np.intp)
        self._shift[key] = arr
        return arr

    def zero_vec(self, d: int):
        return vzeros(self.field, self.dim(d))

    def mono_vec(self, mono):
        d = sum(mono)
        v = self.zero_vec(d)
        v[self.index_of(mono)] = self.field.one()
        return v

    def vec_from_terms(self, d: int, terms):
        """Vector of a degree-d polynomial given as (coeff, exponent tuple) pairs."""
        v = self.zero_vec(d)
        f = self.field
        for coeff, mono in terms:
            mono = tuple(mono)
            if sum(mono) != d:
                raise ValueError("term degree mismatch")
            i = self.index_of(mono)
            v[i] = f.add(v[i], f.of(coeff))
        return v

    def multiply(self, f, df: int, g, dg: int):
        """Product of homogeneous coefficient vectors, degree df + dg."""
        d = df + dg
        if d > self.trunc:
            raise DegreeRangeError("product degree %d beyond truncation" % d)
        fd = self.field
        out = self.zero_vec(d)
        monos_f = self.monomials(df)
        if fd.kind == "prime":
            g = _np(g)
            for i in vnonzero_indices(fd, f):
                shift = self.mono_shift(monos_f[i], dg)
                out[shift] = (out[shift] + int(f[i]) * g) % fd.p
            return out
        for i in vnonzero_indices(fd, f):
            shift = self.mono_shift(monos_f[i], dg)
            ci = f[i]
            for j, gj in enumerate(g):
                if gj != 0:
                    out[shift[j]] += ci * gj
        return out

    def mult_matrix(self, f, df: int, d: int) -> ExactMatrix:
        """Matrix of multiplication by f: [P]_d -> [P]_{d+df}."""
        target = d + df
        if target > self.trunc:
            raise DegreeRangeError("multiplication target degree beyond truncation")
        fd = self.field
        m = ExactMatrix.zeros(fd, self.dim(target), self.dim(d))
        monos_f = self.monomials(df)
        cols = np.arange(self.dim(d)) if fd.kind == "prime" else range(self.dim(d))
        for i in vnonzero_indices(fd, f):
            shift = self.mono_shift(monos_f[i], d)
            if fd.kind == "prime":
                m.data[shift, cols] = (m.data[shift, cols] + int(f[i])) % fd.p
            else:
                ci = f[i]
                for j in range(self.dim(d)):
                    m.data[shift[j]][j] += ci
        return m

    def poly_str(self, f, d: int) -> str:
        fd = self.field
        terms = []
        monos = self.monomials(d)
        for i in vnonzero_indices(fd, f):
            c = fd.scalar_str(f[i])
            terms.append("%s*%s" % (c, mono_str(monos[i], self.names)))
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return "GradedRing(%r, vars=%s, trunc=%d)" % (self.field, ",".join(self.names), self.trunc)


class RingElement:
    """An element of a GradedRing or QuotientAlgebra, stored per degree."""

    __slots__ = ("host", "comps")

    def __init__(self, host, comps):
        self.host = host
        self.comps = {d: _coerce_vec(host.field, v)
                      for d, v in comps.items() if not vis_zero(host.field, v)}

    @classmethod
    def homogeneous(cls, host, d: int, vec) -> "RingElement":
        return cls(host, {d: vec})

    @classmethod
    def zero(cls, host) -> "RingElement":
        return cls(host, {})

    @classmethod
    def one(cls, host) -> "RingElement":
        v = vzeros(host.field, host.dim(0))
        v[0] = host.field.one()
        return cls(host, {0: v})

    @property
    def field(self):
        return self.host.field

    def is_zero(self) -> bool:
        return not self.comps

    def is_homogeneous(self) -> bool:
        return len(self.comps) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous element; 0 for the zero element."""
        if not self.comps:
            return 0
        if len(self.comps) > 1:
            raise ValueError("element is not homogeneous")
        return next(iter(self.comps))

    def component(self, d: int):
        v = self.comps.get(d)
        if v is None:
            return vzeros(self.field, self.host.dim(d))
        return vcopy(self.field, v)

    def __add__(self, other):
        self._check(other)
        comps = {d: vcopy(self.field, v) for d, v in self.comps.items()}
        for d, v in other.comps.items():
            if d in comps:
                comps[d] = vadd(self.field, comps[d], v)
            else:
                comps[d] = vcopy(self.field, v)
        return RingElement(self.host, comps)

    def __neg__(self):
        neg1 = self.field.neg(self.field.one())
        return self.scale(neg1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return RingElement(self.host, {d: vscale(self.field, c, v) for d, v in self.comps.items()})

    def __mul__(self, other):
        self._check(other)
        comps = {}
        for d1, v1 in self.comps.items():
            for d2, v2 in other.comps.items():
                prod = self.host.component_product(v1, d1, v2, d2)
                if prod is None:
                    continue
                d = d1 + d2
                if d in comps:
                    comps[d] = vadd(self.field, comps[d], prod)
                else:
                    comps[d] = prod
        return RingElement(self.host, comps)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.host is other.host and (self - other).is_zero()

    def __hash__(self):
        return hash(id(self.host))

    def _check(self, other):
        if self.host is not other.host:
            raise ValueError("elements live in different hosts")

    def __repr__(self):
        host = self.host
        ring = host if isinstance(host, GradedRing) else host.ring
        parts = []
        for d in sorted(self.comps):
            v = self.comps[d]
            if isinstance(host, GradedRing):
                parts.append(ring.poly_str(v, d))
            else:
                parts.append(ring.poly_str(host.lift_vec(d, v), d))
        return " + ".join(parts) if parts else "0"


# GradedRing elements multiply through ring.multiply; give the ring the
# same hook the quotient algebra has so RingElement works for both hosts.
def _ring_component_product(self, v1, d1, v2, d2):
    return self.multiply(v1, d1, v2, d2)


GradedRing.component_product = _ring_component_product
GradedRing.element = lambda self, d, vec: RingElement.homogeneous(self, d, vec)


class QuotientAlgebra:
    """S = P/A for a homogeneous ideal A, stored degree by degree."""

    def __init__(self, ring: GradedRing, ideal_pieces, check_socle: bool = True):
        self.ring = ring
        self.field = ring.field
        if len(ideal_pieces) < ring.trunc + 1:
            raise ValueError("need ideal pieces for every degree up to the truncation")
        self.ideal_pieces = list(ideal_pieces[:ring.trunc + 1])
        self._nonpivots = []
        self._reduce = {}
        self._lift = {}
        self._dims = []
        for d in range(ring.trunc + 1):
            sub = self.ideal_pieces[d]
            if sub.ambient != ring.dim(d):
                raise ValueError("ideal piece at degree %d has wrong ambient" % d)
            nonpiv = sub.complement_pivots()
            self._nonpivots.append(nonpiv)
            self._dims.append(len(nonpiv))
        if check_socle:
            if self._dims[ring.trunc] != 0:
                raise TruncationError(
                    "quotient is nonzero at the truncation degree; "
                    "increase the truncation to certify the socle degree")
        s = 0
        for d in range(ring.trunc, -1, -1):
            if self._dims[d] != 0:
                s = d
                break
        self.socle_degree = s
        for d in range(s + 1, ring.trunc + 1):
            if self._dims[d] != 0:
                raise ValueError("quotient dimensions are not eventually zero; "
                                 "ideal pieces are not closed under multiplication")
        self.hilbert_function = tuple(self._dims[: s + 1])
        self._var_mult = {}
        self._socle_dims = None

    # -- structure ------------------------------------------------------

    def dim(self, d: int) -> int:
        if d < 0 or d > self.ring.trunc:
            return 0
        return self._dims[d]

    @property
    def trunc(self) -> int:
        return self.ring.trunc

    @property
    def names(self):
        return self.ring.names

    @property
    def n(self):
        return self.ring.n

    def length(self) -> int:
        return sum(self.hilbert_function)

    def monomial_basis(self, d: int):
        """Coset representative monomials of [S]_d (non-pivot monomials)."""
        monos = self.ring.monomials(d)
        return [monos[i] for i in self._nonpivots[d]]

    def reduce_matrix(self, d: int) -> ExactMatrix:
        if d not in self._reduce:
            self._reduce[d] = self.ideal_pieces[d].quotient_map()
        return self._reduce[d]

    def lift_matrix(self, d: int) -> ExactMatrix:
        if d not in self._lift:
            f = self.field
            m = ExactMatrix.zeros(f, self.ring.dim(d), self.dim(d))
            for j, c in enumerate(self._nonpivots[d]):
                m.data[c][j] = f.one() if f.kind != "prime" else 1
            self._lift[d] = m
        return self._lift[d]

    def reduce_vec(self, d: int, pvec):
        if d < 0 or d > self.ring.trunc:
            raise DegreeRangeError("degree %d out of range" % d)
        return self.reduce_matrix(d).apply(pvec)

    def lift_vec(self, d: int, svec):
        return self.lift_matrix(d).apply(svec)

    def zero_vec(self, d: int):
        return vzeros(self.field, self.dim(d))

    def var_mult(self, v: int, d: int) -> ExactMatrix:
        """Multiplication by the v-th variable: [S]_d -> [S]_{d+1}."""
        key = (v, d)
        hit = self._var_mult.get(key)
        if hit is None:
            if d + 1 > self.socle_degree:
                hit = ExactMatrix.zeros(self.field, self.dim(d + 1), self.dim(d))
            else:
                var = tuple(1 if i == v else 0 for i in range(self.ring.n))
                pm = self.ring.mult_matrix(self.ring.mono_vec(var), 1, d)
                hit = self.reduce_matrix(d + 1).matmul(pm).matmul(self.lift_matrix(d))
            self._var_mult[key] = hit
        return hit

    def component_product(self, v1, d1, v2, d2):
        d = d1 + d2
        if d > self.socle_degree:
            return None
        p1 = self.lift_vec(d1, v1)
        p2 = self.lift_vec(d2, v2)
        return self.reduce_vec(d, self.ring.multiply(p1, d1, p2, d2))

    def mult_matrix(self, f, df: int, d: int) -> ExactMatrix:
        """Matrix of multiplication by the degree-df class f: [S]_d -> [S]_{d+df}."""
        if d + df > self.socle_degree:
            return ExactMatrix.zeros(self.field, self.dim(d + df), self.dim(d))
        pm = self.ring.mult_matrix(self.lift_vec(df, f), df, d)
        return self.reduce_matrix(d + df).matmul(pm).matmul(self.lift_matrix(d))

    def element(self, d: int, vec) -> RingElement:
        return RingElement.homogeneous(self, d, vec)

    def element_from_poly(self, d: int, pvec) -> RingElement:
        return RingElement.homogeneous(self, d, self.reduce_vec(d, pvec))

    def socle_dims(self):
        """Graded dimensions of (0 : m), the socle."""
        if self._socle_dims is None:
            dims = []
            for d in range(self.socle_degree + 1):
                if self.dim(d) == 0:
                    dims.append(0)
                    continue
                stacked = vstack([self.var_mult(v, d) for v in range(self.ring.n)])
                dims.append(kernel_matrix(stacked).rows)
            self._socle_dims = tuple(dims)
        return self._socle_dims

    @property
    def is_gorenstein(self) -> bool:
        return sum(self.socle_dims()) == 1

    def socle_generator_vec(self):
        """The canonical basis vector of [S]_s for a Gorenstein algebra."""
        if not self.is_gorenstein:
            raise ValueError("socle is not one-dimensional")
        return vfrom(self.field, [self.field.one()])

    def dim_p(self, d: int) -> int:
        return self.ring.dim(d)

    def __repr__(self):
        return "QuotientAlgebra(HF=%s over %r)" % (list(self.hilbert_function), self.field)


def build_quotient(ring: GradedRing, ideal_pieces) -> QuotientAlgebra:
    """Construct S = P/A from per-degree subspaces of A.

    Raises TruncationError when [S]_trunc != 0, since then the socle degree
    cannot be certified within the truncation.
    """
    return QuotientAlgebra(ring, ideal_pieces)


class SoclePairing:
    """Dual bases for the perfect pairing [S]_i x [S]_{s-i} -> [S]_s.

    For each covered degree i, alpha(m) is the class in [S]_{s-i} dual to
    the monomial m: m'_bar * alpha(m) = socle generator if m' == m, else 0.
    Degrees are covered while the monomials of degree i are independent in
    S, i.e. for i < v(S); the five-quadrics pipeline needs cover through 3.
    """

    def __init__(self, algebra: QuotientAlgebra, covered: int, alphas):
        self.algebra = algebra
        self.covered = covered
        self._alphas = alphas  # mono tuple -> vector in [S]_{s - deg}

    def alpha(self, mono):
        d = sum(mono)
        if d == 0:
            return self._socle_vec()
        if d > self.covered:
            raise DegreeRangeError("pairing not built for degree %d" % d)
        return vcopy(self.algebra.field, self._alphas[tuple(mono)])

    def alpha_element(self, mono) -> RingElement:
        d = sum(mono)
        return self.algebra.element(self.algebra.socle_degree - d, self.alpha(mono))

    def _socle_vec(self):
        return self.algebra.socle_generator_vec()

    def socle_coefficient(self, vec):
        """Coefficient of the socle generator in a vector of [S]_s."""
        return vec[0]


class PairingError(ValueError):
    pass


def build_pairing(S: QuotientAlgebra, through: int = 3) -> SoclePairing:
    """Dual bases of the socle pairing, for degrees i <= min(through, s, v-1).

    The per-degree Gram matrix of multiplication into the socle is
    inverted; a singular Gram matrix signals a non-Gorenstein input or a
    truncation fault and raises PairingError.
    """
    if not S.is_gorenstein:
        raise PairingError("pairing requires a Gorenstein algebra")
    s = S.socle_degree
    ring = S.ring
    f = S.field
    alphas = {}
    covered = 0
    for i in range(1, min(through, s) + 1):
        monos = ring.monomials(i)
        if S.dim(i) != len(monos) or S.dim(s - i) != len(monos):
            break
        # gram[a][b] = socle coefficient of (monomial_a * basis_b)
        rows = []
        for m in monos:
            mcls = S.reduce_vec(i, ring.mono_vec(m))
            mat = S.mult_matrix(mcls, i, s - i)
            rows.append([mat.entry(0, b) for b in range(S.dim(s - i))])
        gram = ExactMatrix.from_rows(f, rows, S.dim(s - i))
        if rref(gram)[1] != len(monos):
            raise PairingError("singular Gram matrix in degree %d" % i)
        x, _ = _solve(gram, ExactMatrix.identity(f, len(monos)))
        for a, m in enumerate(monos):
            col = [x.entry(b, a) for b in range(len(monos))]
            alphas[m] = vfrom(f, col)
        covered = i
    if covered == 0:
        raise PairingError("no pairing degrees covered; v(S) too small")
    pairing = SoclePairing(S, covered, alphas)
    _verify_pairing(pairing)
    return pairing


def _verify_pairing(pairing: SoclePairing):
    """Exact check of the dual-basis relations, all pairs per covered degree."""
    S = pairing.algebra
    ring = S.ring
    f = S.field
    s = S.socle_degree
    for i in range(1, pairing.covered + 1):
        monos = ring.monomials(i)
        for m in monos:
            al = pairing.alpha(m)
            for mp in monos:
                mcls = S.reduce_vec(i, ring.mono_vec(mp))
                prod = S.component_product(mcls, i, al, s - i)
                want = S.socle_generator_vec() if mp == m else vzeros(f, 1)
                if not vis_zero(f, vadd(f, prod, vscale(f, f.neg(f.one()), want))):
                    raise PairingError("dual basis relation fails at %s, %s" % (m, mp))
