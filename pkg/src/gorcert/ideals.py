"""Ideal-level operators: colon, annihilator, socle, Hilbert data, minimal
generators, v(S), Fitting ideals, Gorenstein duality checks, and Macaulay
inverse systems.

A HomogeneousIdeal lives in a host (a QuotientAlgebra, or a truncated
GradedRing) and is stored as one Subspace per degree.  Ideals in an
Artinian quotient are known in every degree; ideals in a truncated
polynomial ring carry the top degree through which their pieces are
certified, and asking beyond it is a hard error rather than a silent
wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import FieldSpec
from .linalg import (ExactMatrix, Subspace, vzeros, vunit, vadd, vscale,
                     vis_zero, vstack, kernel_matrix, rref)
from .rings import (GradedRing, QuotientAlgebra, RingElement,
                    DegreeRangeError, build_quotient)

NEG_INFINITY = float("-inf")


class HostMismatchError(ValueError):
    pass


def _host_field(host) -> FieldSpec:
    return host.field


def _host_top(host) -> int:
    """Last degree at which the host has certified coordinate spaces."""
    if isinstance(host, QuotientAlgebra):
        return host.socle_degree
    return host.trunc


def _host_ring(host) -> GradedRing:
    return host.ring if isinstance(host, QuotientAlgebra) else host


class HomogeneousIdeal:
    """A homogeneous ideal (or graded submodule of the host), per degree."""

    __slots__ = ("host", "pieces", "valid_to")

    def __init__(self, host, pieces, valid_to: int | None = None):
        self.host = host
        top = _host_top(host)
        if valid_to is None:
            valid_to = top
        self.valid_to = min(valid_to, top)
        self.pieces = list(pieces)
        if len(self.pieces) < self.valid_to + 1:
            raise ValueError("missing ideal pieces below the certified degree")

    @classmethod
    def zero(cls, host) -> "HomogeneousIdeal":
        f = _host_field(host)
        top = _host_top(host)
        return cls(host, [Subspace.zero(f, host.dim(d)) for d in range(top + 1)])

    @classmethod
    def unit(cls, host) -> "HomogeneousIdeal":
        f = _host_field(host)
        top = _host_top(host)
        return cls(host, [Subspace.full(f, host.dim(d)) for d in range(top + 1)])

    @classmethod
    def from_generators(cls, host, gens, valid_to: int | None = None) -> "HomogeneousIdeal":
        """Smallest ideal containing the given (degree, vector) generators.

        Pieces are closed under multiplication by the degree-one part of
        the host, degree by degree.
        """
        f = _host_field(host)
        ring = _host_ring(host)
        top = _host_top(host) if valid_to is None else min(valid_to, _host_top(host))
        by_deg = {}
        for d, v in gens:
            if d > top:
                continue
            by_deg.setdefault(d, []).append(v)
        pieces = [Subspace.zero(f, host.dim(0))]
        for d in range(1, top + 1):
            vecs = [list(v) for v in by_deg.get(d, [])]
            prev = pieces[d - 1]
            if prev.dim:
                for v_idx in range(ring.n):
                    m = _var_mult(host, v_idx, d - 1)
                    for i in range(prev.dim):
                        vecs.append(list(m.apply(prev.basis.row(i))))
            pieces.append(Subspace.from_vectors(f, host.dim(d), vecs))
        if 0 in by_deg and any(not vis_zero(f, v) for v in by_deg[0]):
            return cls.unit(host)
        return cls(host, pieces, valid_to=top)

    @classmethod
    def from_elements(cls, host, elements, valid_to: int | None = None) -> "HomogeneousIdeal":
        gens = []
        for e in elements:
            for d, v in e.comps.items():
                gens.append((d, v))
        return cls.from_generators(host, gens, valid_to=valid_to)

    # -- pieces ---------------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return _host_field(self.host)

    def piece(self, d: int) -> Subspace:
        if d < 0:
            return Subspace.zero(self.field, 0)
        if d > self.valid_to:
            if isinstance(self.host, QuotientAlgebra) and d > self.host.socle_degree:
                return Subspace.zero(self.field, self.host.dim(d))
            raise DegreeRangeError(
                "ideal piece at degree %d requested; certified only through %d"
                % (d, self.valid_to))
        return self.pieces[d]

    def dim(self, d: int) -> int:
        return self.piece(d).dim

    def hilbert_function(self):
        return tuple(self.pieces[d].dim for d in range(self.valid_to + 1))

    def is_zero(self) -> bool:
        return all(p.dim == 0 for p in self.pieces[: self.valid_to + 1])

    def contains_vec(self, d: int, v) -> bool:
        return self.piece(d).contains(v)

    def contains_element(self, e: RingElement) -> bool:
        return all(self.piece(d).contains(v) for d, v in e.comps.items())

    def __eq__(self, other):
        if not isinstance(other, HomogeneousIdeal):
            return NotImplemented
        if self.host is not other.host:
            return False
        lo = min(self.valid_to, other.valid_to)
        return all(self.pieces[d] == other.pieces[d] for d in range(lo + 1))

    def __hash__(self):
        return hash(id(self.host))

    def contains_ideal(self, other: "HomogeneousIdeal") -> bool:
        lo = min(self.valid_to, other.valid_to)
        return all(self.pieces[d].contains_subspace(other.pieces[d]) for d in range(lo + 1))

    # -- lattice operations ----------------------------------------------

    def _check(self, other):
        if self.host is not other.host:
            raise HostMismatchError("ideals live in different hosts")

    def sum(self, other: "HomogeneousIdeal") -> "HomogeneousIdeal":
        self._check(other)
        lo = min(self.valid_to, other.valid_to)
        return HomogeneousIdeal(
            self.host, [self.pieces[d].sum(other.pieces[d]) for d in range(lo + 1)], lo)

    def intersect(self, other: "HomogeneousIdeal") -> "HomogeneousIdeal":
        self._check(other)
        lo = min(self.valid_to, other.valid_to)
        return HomogeneousIdeal(
            self.host, [self.pieces[d].intersect(other.pieces[d]) for d in range(lo + 1)], lo)

    def product(self, other: "HomogeneousIdeal") -> "HomogeneousIdeal":
        """The ideal product, built from products of minimal generators."""
        self._check(other)
        gens1 = min_generators(self)
        gens2 = min_generators(other)
        prods = []
        host = self.host
        top = min(self.valid_to, other.valid_to)
        for d1, v1 in gens1:
            for d2, v2 in gens2:
                if d1 + d2 > top:
                    continue
                prod = host.component_product(v1, d1, v2, d2)
                if prod is not None and not vis_zero(self.field, prod):
                    prods.append((d1 + d2, prod))
        # certified range: a piece of I*J at degree d needs all generator
        # products up to d, which are known through top
        return HomogeneousIdeal.from_generators(host, prods, valid_to=top)

    def multiply_element(self, d_e: int, vec) -> "HomogeneousIdeal":
        host = self.host
        top = self.valid_to
        gens = []
        for d, v in min_generators(self):
            if d + d_e > top:
                continue
            prod = host.component_product(vec, d_e, v, d)
            if prod is not None:
                gens.append((d + d_e, prod))
        return HomogeneousIdeal.from_generators(host, gens, valid_to=top)


def _var_mult(host, v: int, d: int) -> ExactMatrix:
    if isinstance(host, QuotientAlgebra):
        return host.var_mult(v, d)
    ring = host
    var = tuple(1 if i == v else 0 for i in range(ring.n))
    return ring.mult_matrix(ring.mono_vec(var), 1, d)


def _element_mult_matrix(host, vec, df: int, d: int) -> ExactMatrix:
    if isinstance(host, QuotientAlgebra):
        return host.mult_matrix(vec, df, d)
    return host.mult_matrix(vec, df, d)


def check_closure(I: HomogeneousIdeal) -> bool:
    """[S]_1 * [I]_d lies in [I]_{d+1} for every certified degree."""
    host = I.host
    ring = _host_ring(host)
    for d in range(I.valid_to):
        pc = I.pieces[d]
        nxt = I.pieces[d + 1]
        for v in range(ring.n):
            m = _var_mult(host, v, d)
            for i in range(pc.dim):
                if not nxt.contains(m.apply(pc.basis.row(i))):
                    return False
    return True


def colon(L: HomogeneousIdeal, M, valid_to: int | None = None) -> HomogeneousIdeal:
    """The colon ideal (L : M) = {x in host : x*M <= L}.

    M may be another ideal with the same host, a RingElement, or a list of
    (degree, vector) pairs; colon against an ideal uses its minimal
    generators.
    """
    host = L.host
    f = L.field
    if isinstance(M, HomogeneousIdeal):
        L._check(M)
        gens = min_generators(M)
    elif isinstance(M, RingElement):
        gens = [(d, v) for d, v in M.comps.items()]
    else:
        gens = list(M)
    gens = [(d, v) for d, v in gens if not vis_zero(f, v)]
    top = L.valid_to if valid_to is None else min(valid_to, L.valid_to)
    if not gens:
        return HomogeneousIdeal.unit(host)
    if isinstance(host, QuotientAlgebra):
        # every piece beyond the socle degree vanishes, so constraints in
        # those degrees are vacuous and all degrees are certified
        limit = top
    else:
        limit = min(top, min(L.valid_to - d for d, _ in gens))
    pieces = []
    for d in range(limit + 1):
        mats = []
        for dg, g in gens:
            if isinstance(host, QuotientAlgebra) and d + dg > host.socle_degree:
                continue
            target = L.piece(d + dg)
            q = target.quotient_map()
            mats.append(q.matmul(_element_mult_matrix(host, g, dg, d)))
        if not mats:
            pieces.append(Subspace.full(f, host.dim(d)))
            continue
        stacked = vstack(mats)
        ker = kernel_matrix(stacked)
        pieces.append(Subspace(host.dim(d), ker))
    return HomogeneousIdeal(host, pieces, valid_to=limit)


def annihilator(host, M) -> HomogeneousIdeal:
    return colon(HomogeneousIdeal.zero(host), M)


def socle_ideal(host, I: HomogeneousIdeal | None = None):
    """socle(host/I) as the ideal (I : m), plus the graded dimensions of
    (I : m)/I."""
    if I is None:
        I = HomogeneousIdeal.zero(host)
    ring = _host_ring(host)
    one = ring.mono_vec(tuple(0 for _ in range(ring.n)))
    var_gens = []
    for v in range(ring.n):
        mono = tuple(1 if i == v else 0 for i in range(ring.n))
        vec = ring.mono_vec(mono)
        if isinstance(host, QuotientAlgebra):
            vec = host.reduce_vec(1, vec)
        var_gens.append((1, vec))
    soc = colon(I, var_gens)
    dims = tuple(soc.dim(d) - I.piece(d).dim for d in range(soc.valid_to + 1))
    return soc, dims


@dataclass
class IdealInvariants:
    hilbert_function: tuple       # HF of the ideal itself
    quotient_hf: tuple            # HF of host/I over the same range
    length: int                   # lambda(I)
    colength: int                 # lambda(host/I)
    min_gen_degrees: tuple        # multiset of minimal generator degrees
    mgd: float                    # max generator degree, -inf for the zero ideal
    topdeg: float                 # top degree of I, -inf for the zero ideal
    quotient_topdeg: float        # top degree of host/I


def min_generators(I: HomogeneousIdeal):
    """Deterministic minimal generators, degree by degree.

    In each degree the span of [S]_1 * [I]_{d-1} inside [I]_d is completed
    by standard coordinate vectors at the non-pivot positions of its
    reduced basis (graded-lex tie-breaking).
    """
    host = I.host
    ring = _host_ring(host)
    f = I.field
    gens = []
    for d in range(I.valid_to + 1):
        pc = I.pieces[d]
        if pc.dim == 0:
            continue
        image_vecs = []
        if d >= 1 and I.pieces[d - 1].dim:
            prev = I.pieces[d - 1]
            for v in range(ring.n):
                m = _var_mult(host, v, d - 1)
                for i in range(prev.dim):
                    image_vecs.append(m.apply(prev.basis.row(i)))
        # coordinates inside [I]_d
        coords = []
        for w in image_vecs:
            cw = pc.coordinates(w)
            if cw is None:
                raise ValueError("ideal pieces are not closed under multiplication")
            coords.append(list(cw))
        u = Subspace.from_vectors(f, pc.dim, coords) if coords else Subspace.zero(f, pc.dim)
        for c in u.complement_pivots():
            gens.append((d, _coord_vector(pc, c)))
    return gens


def _coord_vector(pc: Subspace, c: int):
    # unit coordinate vector c inside the subspace, expressed in the ambient
    return pc.basis.transpose().apply(vunit(pc.field, pc.dim, c))


def invariants(I: HomogeneousIdeal) -> IdealInvariants:
    host = I.host
    hf = I.hilbert_function()
    qhf = tuple(host.dim(d) - hf[d] for d in range(len(hf)))
    gens = min_generators(I)
    gd = tuple(sorted(d for d, _ in gens))
    topdeg = NEG_INFINITY
    for d in range(len(hf) - 1, -1, -1):
        if hf[d]:
            topdeg = d
            break
    qtop = NEG_INFINITY
    for d in range(len(qhf) - 1, -1, -1):
        if qhf[d]:
            qtop = d
            break
    return IdealInvariants(
        hilbert_function=hf,
        quotient_hf=qhf,
        length=sum(hf),
        colength=sum(qhf),
        min_gen_degrees=gd,
        mgd=max(gd) if gd else NEG_INFINITY,
        topdeg=topdeg,
        quotient_topdeg=qtop,
    )


def v_of(S: QuotientAlgebra) -> int:
    """v(S): first degree where HF(S) drops below the polynomial ring's.

    Computed from the Hilbert function and cross-checked against the
    initial degree of the defining ideal; the two must agree for graded
    quotients.
    """
    ring = S.ring
    v_hf = None
    for d in range(S.trunc + 1):
        if S.dim(d) < ring.dim(d):
            v_hf = d
            break
    if v_hf is None:
        raise DegreeRangeError("v(S) exceeds the truncation degree")
    v_init = None
    for d in range(ring.trunc + 1):
        if S.ideal_pieces[d].dim > 0:
            v_init = d
            break
    if v_init != v_hf:
        raise ValueError("v(S) definitions disagree: HF drop at %s, ideal starts at %s"
                         % (v_hf, v_init))
    return v_hf


def defining_ideal(S: QuotientAlgebra) -> HomogeneousIdeal:
    """The ideal of relations A with S = P/A, as an ideal of the ring."""
    return HomogeneousIdeal(S.ring, list(S.ideal_pieces), valid_to=S.ring.trunc)


def ideal_in_quotient(S: QuotientAlgebra, gens) -> HomogeneousIdeal:
    """Ideal of S from (degree, P-vector or S-vector) generator pairs."""
    fixed = []
    for d, v in gens:
        if len(v) == S.ring.dim(d) and S.ring.dim(d) != S.dim(d):
            v = S.reduce_vec(d, v)
        fixed.append((d, v))
    return HomogeneousIdeal.from_generators(S, fixed)


def lift_to_ring(I: HomogeneousIdeal) -> HomogeneousIdeal:
    """Preimage in P of an ideal of S = P/A (contains A)."""
    S = I.host
    if not isinstance(S, QuotientAlgebra):
        return I
    ring = S.ring
    f = I.field
    pieces = []
    for d in range(ring.trunc + 1):
        if d > S.socle_degree:
            # above the socle degree the preimage is everything
            pieces.append(Subspace.full(f, ring.dim(d)))
            continue
        if d > I.valid_to:
            raise DegreeRangeError("cannot lift an ideal with uncertified pieces")
        vecs = [S.ideal_pieces[d].basis.row(i) for i in range(S.ideal_pieces[d].dim)]
        for i in range(I.pieces[d].dim):
            vecs.append(S.lift_vec(d, I.pieces[d].basis.row(i)))
        pieces.append(Subspace.from_vectors(f, ring.dim(d), vecs))
    return HomogeneousIdeal(ring, pieces, valid_to=ring.trunc)


def quotient_by(S: QuotientAlgebra, I: HomogeneousIdeal) -> QuotientAlgebra:
    """The algebra S/I presented as P/(A + lift of I)."""
    lifted = lift_to_ring(I)
    return build_quotient(S.ring, lifted.pieces)


# -- Gorenstein duality ------------------------------------------------

@dataclass
class DualityCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class DualityReport:
    checks: list

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {"all_pass": self.all_pass,
                "checks": [{"name": c.name, "pass": c.passed, "detail": c.detail}
                           for c in self.checks]}


def duality_suite(S: QuotientAlgebra, A: HomogeneousIdeal, B: HomogeneousIdeal) -> DualityReport:
    """The five Gorenstein duality identities, checked exactly.

    (a) lambda(S/A) = lambda(ann A); (b) ann(ann A) = A;
    (c) ann(A+B) = ann A meet ann B; (d) ann(A meet B) = ann A + ann B;
    (e) if A <= B then lambda(B/A) = lambda(ann A / ann B).
    Failures are reported with a witness, not raised.
    """
    if not S.is_gorenstein:
        raise ValueError("duality suite requires a Gorenstein algebra")
    checks = []
    annA = annihilator(S, A)
    annB = annihilator(S, B)
    invA = invariants(A)
    lam_ann_A = sum(annA.hilbert_function())
    checks.append(DualityCheck(
        "length(S/A) == length(ann A)",
        invA.colength == lam_ann_A,
        "" if invA.colength == lam_ann_A else
        "lambda(S/A)=%d, lambda(ann A)=%d" % (invA.colength, lam_ann_A)))
    double = annihilator(S, annA)
    ok = double == A
    checks.append(DualityCheck(
        "ann(ann A) == A", ok,
        "" if ok else _first_difference(double, A)))
    lhs = annihilator(S, A.sum(B))
    rhs = annA.intersect(annB)
    ok = lhs == rhs
    checks.append(DualityCheck(
        "ann(A+B) == ann A `intersect` ann B", ok,
        "" if ok else _first_difference(lhs, rhs)))
    lhs = annihilator(S, A.intersect(B))
    rhs = annA.sum(annB)
    ok = lhs == rhs
    checks.append(DualityCheck(
        "ann(A `intersect` B) == ann A + ann B", ok,
        "" if ok else _first_difference(lhs, rhs)))
    if B.contains_ideal(A):
        lam_BA = sum(B.hilbert_function()) - sum(A.hilbert_function())
        lam_dual = sum(annA.hilbert_function()) - sum(annB.hilbert_function())
        ok = lam_BA == lam_dual
        checks.append(DualityCheck(
            "A <= B implies length(B/A) == length(ann A/ann B)", ok,
            "" if ok else "lambda(B/A)=%d, dual=%d" % (lam_BA, lam_dual)))
    else:
        checks.append(DualityCheck(
            "A <= B implies length(B/A) == length(ann A/ann B)", True,
            "not applicable: A is not contained in B"))
    return DualityReport(checks)


def _first_difference(I: HomogeneousIdeal, J: HomogeneousIdeal) -> str:
    lo = min(I.valid_to, J.valid_to)
    for d in range(lo + 1):
        if I.pieces[d] != J.pieces[d]:
            return "pieces differ at degree %d (dims %d vs %d)" % (
                d, I.pieces[d].dim, J.pieces[d].dim)
    return "identical on the certified range"


# -- Macaulay inverse systems -------------------------------------------

def inverse_system_pieces(ring: GradedRing, deg_f: int, fvec):
    """Per-degree pieces of Ann(F) for a dual form F of degree deg_f.

    F is a coefficient vector over the divided-power monomials of degree
    deg_f; the contraction action sends a monomial m of degree d to the
    dual monomial coefficient slice F[m + _].  Contraction (rather than
    differentiation) keeps the correspondence correct in every
    characteristic.
    """
    f = ring.field
    if vis_zero(f, fvec):
        raise ValueError("dual form must be nonzero")
    pieces = []
    for d in range(ring.trunc + 1):
        if d > deg_f:
            pieces.append(Subspace.full(f, ring.dim(d)))
            continue
        cat = catalecticant(ring, deg_f, fvec, d)
        pieces.append(Subspace(ring.dim(d), kernel_matrix(cat)))
    return pieces


def catalecticant(ring: GradedRing, deg_f: int, fvec, d: int) -> ExactMatrix:
    """Matrix of contraction by degree-d monomials: rows indexed by the
    dual monomials of degree deg_f - d, columns by monomials of degree d."""
    f = ring.field
    rows = ring.dim(deg_f - d)
    cols = ring.dim(d)
    m = ExactMatrix.zeros(f, rows, cols)
    monos_d = ring.monomials(d)
    monos_rest = ring.monomials(deg_f - d)
    idx = {mono: i for i, mono in enumerate(ring.monomials(deg_f))}
    from .rings import mono_mul
    for j, mj in enumerate(monos_d):
        for i, mi in enumerate(monos_rest):
            c = fvec[idx[mono_mul(mj, mi)]]
            if c != 0:
                m.data[i][j] = c if f.kind != "prime" else int(c)
    return m


def gorenstein_from_dual_form(ring: GradedRing, deg_f: int, fvec) -> QuotientAlgebra:
    return build_quotient(ring, inverse_system_pieces(ring, deg_f, fvec))


# -- Fitting ideal -------------------------------------------------------

def fitt1(I_or_module, host=None) -> HomogeneousIdeal:
    """Fitt^1: the ideal of entries of a minimal presentation matrix.

    Computed twice from independently pivoted minimal presentations; the
    two entry ideals must agree (the Fitting ideal does not depend on the
    presentation), otherwise an internal error is raised.
    """
    from .complexes import minimal_presentation, module_from_ideal
    if isinstance(I_or_module, HomogeneousIdeal):
        host = I_or_module.host
        mod = module_from_ideal(I_or_module)
    else:
        mod = I_or_module
        if host is None:
            host = mod.host
    ideals = []
    for variant in ("standard", "reverse"):
        pres = minimal_presentation(mod, variant=variant)
        gens = []
        for (i, j), e in pres.entries.items():
            for d, v in e.comps.items():
                gens.append((d, v))
        ideals.append(HomogeneousIdeal.from_generators(host, gens))
    if ideals[0] != ideals[1]:
        raise AssertionError("Fitting ideal depends on the presentation; "
                             "minimality is broken")
    return ideals[0]
