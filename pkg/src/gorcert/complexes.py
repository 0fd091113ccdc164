"""Graded free modules, degree-preserving maps, Koszul complexes, minimal
presentations and resolutions, second syzygies, and graded Tor/Ext tables.

Modules are realized concretely: a GradedModule knows its coordinate space
in each degree and the matrices by which the ring variables act.  All
resolutions here are minimal by construction (generators are chosen as
complements of [m]*M degree by degree), and everything over a truncated
polynomial ring carries the degree bound through which it is certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
import json

from .fields import FieldSpec
from .linalg import (ExactMatrix, Subspace, kernel_matrix, rref, vunit,
                     vis_zero)
from .rings import GradedRing, QuotientAlgebra, RingElement, DegreeRangeError
from .ideals import HomogeneousIdeal


def _host_ring(host):
    return host.ring if isinstance(host, QuotientAlgebra) else host


def _host_top(host) -> int:
    if isinstance(host, QuotientAlgebra):
        return host.socle_degree
    return host.trunc


def _host_var_mult(host, v: int, d: int) -> ExactMatrix:
    if isinstance(host, QuotientAlgebra):
        return host.var_mult(v, d)
    ring = host
    var = tuple(1 if i == v else 0 for i in range(ring.n))
    return ring.mult_matrix(ring.mono_vec(var), 1, d)


class GradedFreeModule:
    """A free module ⊕ host(-b_i); twists lists the generator degrees b_i."""

    __slots__ = ("host", "twists")

    def __init__(self, host, twists):
        self.host = host
        self.twists = tuple(twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def dim(self, d: int) -> int:
        return sum(self.host.dim(d - b) for b in self.twists)

    def offsets(self, d: int):
        offs = []
        acc = 0
        for b in self.twists:
            offs.append(acc)
            acc += self.host.dim(d - b)
        return offs

    def var_action(self, v: int, d: int) -> ExactMatrix:
        m = ExactMatrix.zeros(self.host.field, self.dim(d + 1), self.dim(d))
        out_offs = self.offsets(d + 1)
        in_offs = self.offsets(d)
        for i, b in enumerate(self.twists):
            if self.host.dim(d - b) == 0 or self.host.dim(d + 1 - b) == 0:
                continue
            blk = _host_var_mult(self.host, v, d - b)
            _paste(m, blk, out_offs[i], in_offs[i])
        return m

    def __repr__(self):
        return "Free(twists=%s)" % (list(self.twists),)

    def __eq__(self, other):
        return (isinstance(other, GradedFreeModule) and self.host is other.host
                and self.twists == other.twists)

    def __hash__(self):
        return hash(self.twists)


def _paste(m: ExactMatrix, blk: ExactMatrix, r0: int, c0: int):
    if m.field.kind == "prime":
        m.data[r0:r0 + blk.rows, c0:c0 + blk.cols] = blk.data
    else:
        for i in range(blk.rows):
            row = m.data[r0 + i]
            brow = blk.data[i]
            for j in range(blk.cols):
                row[c0 + j] = brow[j]


class GradedMap:
    """A degree-preserving map of graded free modules.

    entries[(i, j)] is the homogeneous element by which generator j of the
    source hits generator i of the target; its degree must equal
    source.twists[j] - target.twists[i].
    """

    __slots__ = ("source", "target", "entries", "_realized")

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, entries):
        self.source = source
        self.target = target
        self.entries = {}
        for (i, j), e in entries.items():
            if e is None or e.is_zero():
                continue
            want = source.twists[j] - target.twists[i]
            if not e.is_homogeneous() or e.degree() != want:
                raise ValueError("entry (%d, %d) must be homogeneous of degree %d" % (i, j, want))
            self.entries[(i, j)] = e
        self._realized = {}

    @property
    def host(self):
        return self.source.host

    def entry(self, i: int, j: int) -> RingElement:
        e = self.entries.get((i, j))
        if e is None:
            return RingElement.zero(self.host)
        return e

    def realize(self, d: int) -> ExactMatrix:
        hit = self._realized.get(d)
        if hit is not None:
            return hit
        host = self.host
        m = ExactMatrix.zeros(host.field, self.target.dim(d), self.source.dim(d))
        t_offs = self.target.offsets(d)
        s_offs = self.source.offsets(d)
        for (i, j), e in self.entries.items():
            sdim = host.dim(d - self.source.twists[j])
            tdim = host.dim(d - self.target.twists[i])
            if sdim == 0 or tdim == 0:
                continue
            de = e.degree()
            blk = host.mult_matrix(e.component(de), de, d - self.source.twists[j])
            _paste(m, blk, t_offs[i], s_offs[j])
        self._realized[d] = m
        return m

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other (self ∘ other)."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        entries = {}
        for (i, k), e1 in self.entries.items():
            for (k2, j), e2 in other.entries.items():
                if k2 != k:
                    continue
                prod = e1 * e2
                if prod.is_zero():
                    continue
                key = (i, j)
                if key in entries:
                    entries[key] = entries[key] + prod
                else:
                    entries[key] = prod
        return GradedMap(other.source, self.target, entries)

    def add(self, other: "GradedMap") -> "GradedMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("maps have different shapes")
        entries = dict(self.entries)
        for key, e in other.entries.items():
            entries[key] = entries[key] + e if key in entries else e
        return GradedMap(self.source, self.target, entries)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target,
                         {k: e.scale(c) for k, e in self.entries.items()})

    def is_zero_map(self) -> bool:
        return not self.entries

    def entry_elements(self):
        return list(self.entries.values())

    def to_entry_lists(self):
        """Entries as dense lists of (degree, coefficient list) pairs."""
        out = []
        host = self.host
        f = host.field
        for i in range(self.target.rank):
            row = []
            for j in range(self.source.rank):
                e = self.entries.get((i, j))
                if e is None:
                    row.append(None)
                else:
                    d = e.degree()
                    row.append([d, [f.scalar_str(x) for x in e.component(d)]])
            out.append(row)
        return out

    @classmethod
    def from_blocks(cls, sources, targets, blocks) -> "GradedMap":
        """Assemble a map from a 2-D grid of maps (rows: targets, cols: sources)."""
        host = None
        src_twists = []
        for sm in sources:
            src_twists.extend(sm.twists)
            host = sm.host
        tgt_twists = []
        for tm in targets:
            tgt_twists.extend(tm.twists)
        source = GradedFreeModule(host, src_twists)
        target = GradedFreeModule(host, tgt_twists)
        entries = {}
        r0 = 0
        for bi, tm in enumerate(targets):
            c0 = 0
            for bj, sm in enumerate(sources):
                blk = blocks[bi][bj]
                if blk is not None:
                    for (i, j), e in blk.entries.items():
                        entries[(r0 + i, c0 + j)] = e
                c0 += sm.rank
            r0 += tm.rank
        return cls(source, target, entries)

    @classmethod
    def zero(cls, source, target) -> "GradedMap":
        return cls(source, target, {})

    @classmethod
    def scalar_diagonal(cls, module: GradedFreeModule, element: RingElement) -> "GradedMap":
        """element * identity, as a map module(-deg) -> module."""
        de = element.degree()
        shifted = GradedFreeModule(module.host, tuple(b + de for b in module.twists))
        entries = {(i, i): element for i in range(module.rank)}
        return cls(shifted, module, entries)

    def __repr__(self):
        return "GradedMap(%s -> %s, %d entries)" % (self.source, self.target, len(self.entries))


# -- concrete graded modules -------------------------------------------

class GradedModule:
    """A graded module realized per degree with variable action matrices."""

    def __init__(self, host, dims, action_fn, lo: int, hi: int, describe: str = ""):
        self.host = host
        self._dims = dict(dims)
        self._action_fn = action_fn
        self.lo = lo
        self.hi = hi
        self.describe = describe
        self._action = {}
        self._mono_action = {}

    @property
    def field(self) -> FieldSpec:
        return self.host.field

    def dim(self, d: int) -> int:
        return self._dims.get(d, 0)

    def dims(self):
        return {d: n for d, n in sorted(self._dims.items()) if n}

    def total_dim(self) -> int:
        return sum(self._dims.values())

    def action(self, v: int, d: int) -> ExactMatrix:
        key = (v, d)
        hit = self._action.get(key)
        if hit is None:
            if self.dim(d) == 0 or self.dim(d + 1) == 0:
                hit = ExactMatrix.zeros(self.field, self.dim(d + 1), self.dim(d))
            else:
                hit = self._action_fn(v, d)
            self._action[key] = hit
        return hit

    def mono_action(self, mono, d: int) -> ExactMatrix:
        e = sum(mono)
        if e == 0:
            return ExactMatrix.identity(self.field, self.dim(d))
        key = (tuple(mono), d)
        hit = self._mono_action.get(key)
        if hit is None:
            v = next(i for i, a in enumerate(mono) if a)
            rest = tuple(a - 1 if i == v else a for i, a in enumerate(mono))
            hit = self.mono_action(rest, d + 1).matmul(self.action(v, d))
            self._mono_action[key] = hit
        return hit

    def element_action(self, vec, de: int, d: int) -> ExactMatrix:
        """Matrix of multiplication by a degree-de host element on [M]_d."""
        ring = _host_ring(self.host)
        host = self.host
        if isinstance(host, QuotientAlgebra):
            pvec = host.lift_vec(de, vec)
        else:
            pvec = vec
        out = ExactMatrix.zeros(self.field, self.dim(d + de), self.dim(d))
        monos = ring.monomials(de)
        for i, c in enumerate(pvec):
            if c == 0:
                continue
            out = out.add(self.mono_action(monos[i], d).scale(c))
        return out

    def min_generators(self, variant: str = "standard"):
        """Minimal generators: complements of [m]*M, degree by degree.

        variant="reverse" flips the coordinate order before choosing the
        complement, yielding an independently pivoted generating set.
        """
        gens = []
        ring = _host_ring(self.host)
        f = self.field
        for d in range(self.lo, self.hi + 1):
            nd = self.dim(d)
            if nd == 0:
                continue
            vecs = []
            if self.dim(d - 1):
                for v in range(ring.n):
                    m = self.action(v, d - 1)
                    for i in range(self.dim(d - 1)):
                        col = vunit(f, self.dim(d - 1), i)
                        vecs.append(m.apply(col))
            if variant == "reverse":
                vecs = [list(reversed(list(w))) for w in vecs]
            u = Subspace.from_vectors(f, nd, vecs) if vecs else Subspace.zero(f, nd)
            for c in u.complement_pivots():
                g = vunit(f, nd, c)
                if variant == "reverse":
                    g = vunit(f, nd, nd - 1 - c)
                gens.append((d, g))
        return gens

    def is_zero(self) -> bool:
        return all(n == 0 for n in self._dims.values())


def free_module_realization(F: GradedFreeModule, hi: int | None = None) -> GradedModule:
    host = F.host
    top = _host_top(host)
    if hi is None:
        hi = top + (max(F.twists) if F.twists else 0)
        if isinstance(host, GradedRing):
            hi = top
    lo = min(F.twists) if F.twists else 0
    dims = {d: F.dim(d) for d in range(lo, hi + 1)}
    return GradedModule(host, dims, lambda v, d: F.var_action(v, d), lo, hi, "free")


def module_from_ideal(I: HomogeneousIdeal) -> GradedModule:
    host = I.host
    f = I.field

    def action(v, d):
        pc = I.piece(d)
        nxt = I.piece(d + 1)
        m = _host_var_mult(host, v, d)
        cols = []
        for i in range(pc.dim):
            w = m.apply(pc.basis.row(i))
            cw = nxt.coordinates(w)
            if cw is None:
                raise ValueError("ideal is not closed under multiplication")
            cols.append(cw)
        out = ExactMatrix.zeros(f, nxt.dim, pc.dim)
        for j, cw in enumerate(cols):
            for i, x in enumerate(cw):
                if x != 0:
                    out.data[i][j] = x if f.kind != "prime" else int(x)
        return out

    dims = {d: I.piece(d).dim for d in range(I.valid_to + 1)}
    return GradedModule(host, dims, action, 0, I.valid_to, "ideal")


def module_from_subquotient(I: HomogeneousIdeal, J: HomogeneousIdeal) -> GradedModule:
    """The module I/J for nested ideals J <= I of the same host."""
    if not I.contains_ideal(J):
        raise ValueError("subquotient needs J contained in I")
    host = I.host
    f = I.field
    top = min(I.valid_to, J.valid_to)
    inner = {}

    def data(d):
        if d not in inner:
            pc = I.piece(d)
            coords = []
            for i in range(J.piece(d).dim):
                cw = pc.coordinates(J.piece(d).basis.row(i))
                if cw is None:
                    raise ValueError("J is not inside I at degree %d" % d)
                coords.append(list(cw))
            u = Subspace.from_vectors(f, pc.dim, coords) if coords else Subspace.zero(f, pc.dim)
            inner[d] = (pc, u, u.quotient_map())
        return inner[d]

    def action(v, d):
        pc, u, q = data(d)
        pc1, u1, q1 = data(d + 1)
        m = _host_var_mult(host, v, d)
        # section of q: unit vectors at the non-pivot coordinates of u
        cols = []
        for c in u.complement_pivots():
            w = pc.basis.transpose().apply(vunit(f, pc.dim, c))
            cw = pc1.coordinates(m.apply(w))
            if cw is None:
                raise ValueError("I is not closed under multiplication")
            cols.append(q1.apply(cw))
        out = ExactMatrix.zeros(f, q1.rows, q.rows)
        for j, col in enumerate(cols):
            for i, x in enumerate(col):
                if x != 0:
                    out.data[i][j] = x if f.kind != "prime" else int(x)
        return out

    dims = {}
    for d in range(top + 1):
        dims[d] = I.piece(d).dim - J.piece(d).dim
    return GradedModule(host, dims, action, 0, top, "subquotient")


def module_from_kernel_subspaces(F: GradedFreeModule, pieces, lo: int, hi: int,
                                 describe: str = "kernel") -> GradedModule:
    """A submodule of the free module F given by per-degree subspaces."""
    host = F.host
    f = host.field

    def action(v, d):
        pc = pieces[d]
        nxt = pieces.get(d + 1)
        m = F.var_action(v, d)
        out = ExactMatrix.zeros(f, nxt.dim, pc.dim)
        for j in range(pc.dim):
            w = m.apply(pc.basis.row(j))
            cw = nxt.coordinates(w)
            if cw is None:
                raise ValueError("kernel pieces are not closed under multiplication")
            for i, x in enumerate(cw):
                if x != 0:
                    out.data[i][j] = x if f.kind != "prime" else int(x)
        return out

    dims = {d: pieces[d].dim for d in pieces}
    return GradedModule(host, dims, action, lo, hi, describe)


def module_from_coker(gmap: GradedMap, hi: int | None = None) -> GradedModule:
    """The cokernel of a map of free modules, realized per degree."""
    host = gmap.host
    f = host.field
    F0 = gmap.target
    top = _host_top(host)
    if hi is None:
        hi = top + (max(F0.twists) if F0.twists else 0)
        if isinstance(host, GradedRing):
            hi = top
    lo = min(F0.twists) if F0.twists else 0
    images = {}

    def image(d):
        if d not in images:
            m = gmap.realize(d)
            vecs = [m.data[:, j] for j in range(m.cols)] if f.kind == "prime" else [
                [m.data[i][j] for i in range(m.rows)] for j in range(m.cols)]
            u = Subspace.from_vectors(f, m.rows, vecs) if m.cols else Subspace.zero(f, m.rows)
            images[d] = (u, u.quotient_map())
        return images[d]

    def action(v, d):
        u, q = image(d)
        u1, q1 = image(d + 1)
        m = F0.var_action(v, d)
        cols = []
        for c in u.complement_pivots():
            w = vunit(f, F0.dim(d), c)
            cols.append(q1.apply(m.apply(w)))
        out = ExactMatrix.zeros(f, q1.rows, len(cols))
        for j, col in enumerate(cols):
            for i, x in enumerate(col):
                if x != 0:
                    out.data[i][j] = x if f.kind != "prime" else int(x)
        return out

    dims = {}
    for d in range(lo, hi + 1):
        u, q = image(d)
        dims[d] = F0.dim(d) - u.dim
    return GradedModule(host, dims, action, lo, hi, "coker")


def residue_field_module(host) -> GradedModule:
    f = host.field
    return GradedModule(host, {0: 1},
                        lambda v, d: ExactMatrix.zeros(f, 0, 1), 0, 0, "k")


def algebra_as_module(S: QuotientAlgebra) -> GradedModule:
    return GradedModule(S, {d: S.dim(d) for d in range(S.socle_degree + 1)},
                        lambda v, d: S.var_mult(v, d), 0, S.socle_degree, "S")


# -- covers, presentations, resolutions ---------------------------------

class FreeCover:
    """A minimal surjection F0 -> M with its per-degree realizations."""

    def __init__(self, M: GradedModule, variant: str = "standard"):
        self.module = M
        self.gens = M.min_generators(variant)
        self.F0 = GradedFreeModule(M.host, tuple(d for d, _ in self.gens))
        self._realized = {}

    def realize(self, d: int) -> ExactMatrix:
        hit = self._realized.get(d)
        if hit is not None:
            return hit
        host = self.module.host
        ring = _host_ring(host)
        f = host.field
        m = ExactMatrix.zeros(f, self.module.dim(d), self.F0.dim(d))
        offs = self.F0.offsets(d)
        for k, (b, gvec) in enumerate(self.gens):
            e = d - b
            if e < 0 or host.dim(e) == 0:
                continue
            # columns are indexed by the host's basis in degree e: coset
            # representative monomials for a quotient, all monomials for P
            if isinstance(host, QuotientAlgebra):
                monos = host.monomial_basis(e)
            else:
                monos = ring.monomials(e)
            for j, mono in enumerate(monos):
                col = self.module.mono_action(mono, b).apply(gvec)
                for i, x in enumerate(col):
                    if x != 0:
                        m.data[i][offs[k] + j] = x if f.kind != "prime" else int(x)
        self._realized[d] = m
        return m

    def kernel_pieces(self, lo: int, hi: int):
        pieces = {}
        for d in range(lo, hi + 1):
            pieces[d] = Subspace(self.F0.dim(d), kernel_matrix(self.realize(d)))
        return pieces


def _map_from_kernel_gens(F_prev: GradedFreeModule, gens) -> GradedMap:
    """Build the map F_new -> F_prev whose columns are the kernel generators."""
    host = F_prev.host
    f = host.field
    entries = {}
    new_twists = tuple(d for d, _ in gens)
    F_new = GradedFreeModule(host, new_twists)
    for j, (d, w) in enumerate(gens):
        offs = F_prev.offsets(d)
        for i, b in enumerate(F_prev.twists):
            nd = host.dim(d - b)
            if nd == 0:
                continue
            seg = w[offs[i]:offs[i] + nd]
            if vis_zero(f, seg):
                continue
            entries[(i, j)] = RingElement.homogeneous(host, d - b, seg)
    return GradedMap(F_new, F_prev, entries)


def minimal_presentation(M: GradedModule, variant: str = "standard") -> GradedMap:
    """A minimal presentation F1 -> F0 of M (no unit entries).

    Raises DegreeRangeError when the host truncation cannot certify the
    full degree range of the kernel generators.
    """
    cover = FreeCover(M, variant=variant)
    host = M.host
    top = _host_top(host)
    if isinstance(host, QuotientAlgebra):
        hi = host.socle_degree + (max(cover.F0.twists) if cover.F0.twists else 0)
    else:
        hi = top
    lo = min(cover.F0.twists) if cover.F0.twists else 0
    pieces = cover.kernel_pieces(lo, hi)
    K = module_from_kernel_subspaces(cover.F0, pieces, lo, hi)
    gens = K.min_generators(variant)
    kern_vecs = []
    for d, g in gens:
        w = pieces[d].basis.transpose().apply(g)
        kern_vecs.append((d, w))
    pres = _map_from_kernel_gens(cover.F0, kern_vecs)
    for e in pres.entries.values():
        if e.degree() == 0:
            raise AssertionError("presentation is not minimal: unit entry found")
    return pres


@dataclass
class Resolution:
    maps: list                     # d1: F1 -> F0, d2: F2 -> F1, ...
    F0: GradedFreeModule
    cover: FreeCover
    minimal: bool
    valid_to: int
    complete: bool                 # True when the last computed kernel is zero

    @property
    def length(self) -> int:
        return len(self.maps)

    def free_module(self, i: int) -> GradedFreeModule:
        if i == 0:
            return self.F0
        return self.maps[i - 1].source

    def betti(self):
        """(homological degree, twist) -> rank."""
        table = {}
        for b in self.F0.twists:
            table[(0, b)] = table.get((0, b), 0) + 1
        for i, m in enumerate(self.maps, start=1):
            for b in m.source.twists:
                table[(i, b)] = table.get((i, b), 0) + 1
        return table

    def betti_ranks(self):
        ranks = [self.F0.rank]
        ranks.extend(m.source.rank for m in self.maps)
        return ranks

    def betti_text(self) -> str:
        table = self.betti()
        if not table:
            return "(zero module)"
        steps = sorted({i for i, _ in table})
        twists = sorted({b for _, b in table})
        width = max(5, max(len(str(-b)) for b in twists) + 3)
        lines = ["twist".ljust(8) + "".join(("i=%d" % i).rjust(width) for i in steps)]
        for b in twists:
            row = str(-b).ljust(8)
            for i in steps:
                row += str(table.get((i, b), "")).rjust(width)
            lines.append(row)
        return "\n".join(lines)

    def betti_json(self) -> str:
        table = self.betti()
        items = [{"step": i, "twist": -b, "rank": r}
                 for (i, b), r in sorted(table.items())]
        return json.dumps({"betti": items, "valid_to": self.valid_to,
                           "complete": self.complete}, sort_keys=True)

    def verify_complex(self, lo: int | None = None, hi: int | None = None) -> bool:
        """Consecutive composites vanish in every certified degree."""
        for i in range(len(self.maps) - 1):
            comp = self.maps[i].compose(self.maps[i + 1])
            if comp.entries:
                src = comp.source
                a = lo if lo is not None else (min(src.twists) if src.twists else 0)
                b = hi if hi is not None else self.valid_to
                for d in range(a, b + 1):
                    if not comp.realize(d).is_zero():
                        return False
        # augmentation: cover ∘ d1 = 0
        if self.maps:
            d1 = self.maps[0]
            a = min(d1.source.twists) if d1.source.twists else 0
            b = hi if hi is not None else self.valid_to
            for d in range(a, b + 1):
                m = self.cover.realize(d).matmul(d1.realize(d))
                if not m.is_zero():
                    return False
        return True


def resolve(M: GradedModule, steps: int, variant: str = "standard") -> Resolution:
    """A minimal graded free resolution of M, `steps` maps long.

    Over an Artinian quotient the computation is exact in all degrees.
    Over a truncated polynomial ring the resolution's valid_to records the
    certified degree range, and generator searches that would need to see
    beyond it raise DegreeRangeError.
    """
    host = M.host
    top = _host_top(host)
    cover = FreeCover(M, variant=variant)
    F_prev = cover.F0
    if isinstance(host, QuotientAlgebra):
        hi = host.socle_degree + (max(F_prev.twists) if F_prev.twists else 0)
    else:
        hi = top
    lo = min(F_prev.twists) if F_prev.twists else 0
    pieces = cover.kernel_pieces(lo, hi)
    maps = []
    complete = not F_prev.twists
    for step in range(steps):
        K = module_from_kernel_subspaces(F_prev, pieces, lo, hi)
        if K.is_zero():
            complete = True
            F_new = GradedFreeModule(host, ())
            maps.append(GradedMap.zero(F_new, F_prev))
            break
        gens = K.min_generators(variant)
        if isinstance(host, GradedRing) and gens:
            if max(d for d, _ in gens) >= hi:
                raise DegreeRangeError(
                    "kernel generators reach the truncation degree; "
                    "the resolution step cannot be certified")
        kern_vecs = [(d, pieces[d].basis.transpose().apply(g)) for d, g in gens]
        dmap = _map_from_kernel_gens(F_prev, kern_vecs)
        for e in dmap.entries.values():
            if e.degree() == 0:
                raise AssertionError("resolution is not minimal: unit entry")
        maps.append(dmap)
        F_prev = dmap.source
        if isinstance(host, QuotientAlgebra):
            new_hi = host.socle_degree + (max(F_prev.twists) if F_prev.twists else 0)
        else:
            new_hi = top
        new_lo = min(F_prev.twists) if F_prev.twists else 0
        new_pieces = {}
        for d in range(new_lo, new_hi + 1):
            new_pieces[d] = Subspace(F_prev.dim(d), kernel_matrix(dmap.realize(d)))
        pieces = new_pieces
        lo, hi = new_lo, new_hi
    return Resolution(maps=maps, F0=cover.F0, cover=cover, minimal=True,
                      valid_to=top, complete=complete)


# -- second syzygies ------------------------------------------------------

@dataclass
class PresentedModule:
    module: GradedModule
    gens: tuple                    # generator twists
    presentation: GradedMap        # minimal relations

    def hilbert_function(self):
        return self.module.dims()


def syz2(M: GradedModule, variant: str = "standard"):
    """The second syzygy module ker(F1 -> F0) of a minimal resolution.

    Returns (full, core): both as PresentedModule; core has the free
    direct summands stripped (generators untouched by any relation in the
    minimal presentation generate free summands).
    """
    res = resolve(M, 1, variant=variant)
    d1 = res.maps[0]
    F1 = d1.source
    host = M.host
    if isinstance(host, QuotientAlgebra):
        hi = host.socle_degree + (max(F1.twists) if F1.twists else 0)
    else:
        hi = _host_top(host)
    lo = min(F1.twists) if F1.twists else 0
    pieces = {d: Subspace(F1.dim(d), kernel_matrix(d1.realize(d))) for d in range(lo, hi + 1)}
    K = module_from_kernel_subspaces(F1, pieces, lo, hi, "syz2")
    if K.is_zero():
        empty = GradedFreeModule(host, ())
        zero_pres = GradedMap.zero(empty, empty)
        pm = PresentedModule(K, (), zero_pres)
        return pm, pm
    pres = minimal_presentation(K, variant=variant)
    full = PresentedModule(K, pres.target.twists, pres)
    core = strip_free_summands(full)
    return full, core


def strip_free_summands(pm: PresentedModule) -> PresentedModule:
    """Remove generators that no relation touches; they split off free."""
    pres = pm.presentation
    touched = {i for (i, _j) in pres.entries}
    keep = [i for i in range(pres.target.rank) if i in touched]
    if len(keep) == pres.target.rank:
        return pm
    host = pres.host
    new_target = GradedFreeModule(host, tuple(pres.target.twists[i] for i in keep))
    renum = {i: k for k, i in enumerate(keep)}
    entries = {(renum[i], j): e for (i, j), e in pres.entries.items()}
    new_pres = GradedMap(pres.source, new_target, entries)
    realized = module_from_coker(new_pres)
    return PresentedModule(realized, new_target.twists, new_pres)


# -- Koszul complexes -----------------------------------------------------

def koszul(elements) -> list:
    """The Koszul complex on homogeneous elements, as a list of GradedMaps.

    elements: RingElements of one host.  Step i has rank C(c, i); the
    differential carries e_T to sum of signed f_t e_(T - t).
    """
    if not elements:
        return []
    host = elements[0].host
    degs = [e.degree() for e in elements]
    c = len(elements)
    f = host.field
    maps = []
    for step in range(1, c + 1):
        src_sets = list(combinations(range(c), step))
        tgt_sets = list(combinations(range(c), step - 1))
        tgt_index = {t: i for i, t in enumerate(tgt_sets)}
        src = GradedFreeModule(host, tuple(sum(degs[t] for t in T) for T in src_sets))
        tgt = GradedFreeModule(host, tuple(sum(degs[t] for t in T) for T in tgt_sets))
        entries = {}
        for j, T in enumerate(src_sets):
            for pos, t in enumerate(T):
                rest = tuple(x for x in T if x != t)
                i = tgt_index[rest]
                entries[(i, j)] = elements[t] if pos % 2 == 0 else -elements[t]
        maps.append(GradedMap(src, tgt, entries))
    return maps


# -- Tor and Ext ----------------------------------------------------------

def tensor_realize(dmap: GradedMap, N: GradedModule, d: int) -> ExactMatrix:
    """The realization of dmap ⊗ N in degree d."""
    host = dmap.host
    f = host.field
    src, tgt = dmap.source, dmap.target
    sdims = [N.dim(d - b) for b in src.twists]
    tdims = [N.dim(d - b) for b in tgt.twists]
    soffs = [sum(sdims[:k]) for k in range(len(sdims))]
    toffs = [sum(tdims[:k]) for k in range(len(tdims))]
    m = ExactMatrix.zeros(f, sum(tdims), sum(sdims))
    for (i, j), e in dmap.entries.items():
        if sdims[j] == 0 or tdims[i] == 0:
            continue
        de = e.degree()
        blk = N.element_action(e.component(de), de, d - src.twists[j])
        _paste(m, blk, toffs[i], soffs[j])
    return m


def _tensor_dim(F: GradedFreeModule, N: GradedModule, d: int) -> int:
    return sum(N.dim(d - b) for b in F.twists)


def _tensor_degree_range(F_list, N: GradedModule):
    lo = min((min(F.twists) for F in F_list if F.twists), default=0) + N.lo
    hi = max((max(F.twists) for F in F_list if F.twists), default=0) + N.hi
    return lo, hi


def tor_dims(M: GradedModule, N: GradedModule, i_max: int,
             resolution: Resolution | None = None):
    """Graded dimensions of Tor_i(M, N) for 0 <= i <= i_max.

    Returns {(i, d): dim}.  A precomputed resolution of M may be supplied
    (it must be at least i_max + 1 steps long).
    """
    res = resolution if resolution is not None else resolve(M, i_max + 1)
    if res.length < i_max + 1 and not res.complete:
        raise ValueError("resolution too short for the requested Tor range")
    frees = [res.free_module(i) for i in range(min(res.length, i_max + 1) + 1)]
    lo, hi = _tensor_degree_range(frees, N)
    out = {}
    for i in range(i_max + 1):
        Fi = res.free_module(i) if i <= res.length else GradedFreeModule(M.host, ())
        for d in range(lo, hi + 1):
            nd = _tensor_dim(Fi, N, d)
            if nd == 0:
                continue
            if i == 0:
                ker_dim = nd
            else:
                mat = tensor_realize(res.maps[i - 1], N, d) if i <= res.length else None
                ker_dim = kernel_matrix(mat).rows if mat is not None else nd
            if i < res.length:
                img = tensor_realize(res.maps[i], N, d)
                img_rank = rref(img)[1]
            else:
                img_rank = 0
            dim = ker_dim - img_rank
            if dim:
                out[(i, d)] = dim
    return out


def hom_shift_realize(dmap: GradedMap, d: int) -> ExactMatrix:
    """Realization of Hom(dmap, host) in degree d.

    Hom(F, host) has twists -b; the dual map precomposes, so generator j of
    Hom(target, host) feeds generator k of Hom(source, host) through the
    (j, k) entry of dmap acting by multiplication.
    """
    host = dmap.host
    f = host.field
    src, tgt = dmap.source, dmap.target
    # dual source = Hom(tgt, host): pieces [host]_{d + b_j}
    sdims = [host.dim(d + b) for b in tgt.twists]
    tdims = [host.dim(d + b) for b in src.twists]
    soffs = [sum(sdims[:k]) for k in range(len(sdims))]
    toffs = [sum(tdims[:k]) for k in range(len(tdims))]
    m = ExactMatrix.zeros(f, sum(tdims), sum(sdims))
    for (j, k), e in dmap.entries.items():
        # entry (j, k): source gen k -> target gen j
        if sdims[j] == 0 or tdims[k] == 0:
            continue
        de = e.degree()
        blk = host.mult_matrix(e.component(de), de, d + tgt.twists[j])
        _paste(m, blk, toffs[k], soffs[j])
    return m


def ext_dims(M: GradedModule, i_max: int, resolution: Resolution | None = None):
    """Graded dimensions of Ext^i(M, host) for 0 <= i <= i_max."""
    host = M.host
    if not isinstance(host, QuotientAlgebra):
        raise ValueError("Ext into the ring is computed over Artinian quotients")
    res = resolution if resolution is not None else resolve(M, i_max + 1)
    if res.length < i_max + 1 and not res.complete:
        raise ValueError("resolution too short for the requested Ext range")
    frees = [res.free_module(i) for i in range(min(res.length, i_max + 1) + 1)]
    lo = -max((max(F.twists) for F in frees if F.twists), default=0)
    hi = host.socle_degree - min((min(F.twists) for F in frees if F.twists), default=0)
    out = {}
    for i in range(i_max + 1):
        Fi = res.free_module(i) if i <= res.length else GradedFreeModule(host, ())
        for d in range(lo, hi + 1):
            nd = sum(host.dim(d + b) for b in Fi.twists)
            if nd == 0:
                continue
            if i < res.length:
                mat_out = hom_shift_realize(res.maps[i], d)
                ker_dim = kernel_matrix(mat_out).rows
            else:
                ker_dim = nd
            if i == 0:
                img_rank = 0
            else:
                mat_in = hom_shift_realize(res.maps[i - 1], d) if i <= res.length else None
                img_rank = rref(mat_in)[1] if mat_in is not None else 0
            dim = ker_dim - img_rank
            if dim:
                out[(i, d)] = dim
    return out


def total_dims(table, i_max: int):
    totals = [0] * (i_max + 1)
    for (i, _d), n in table.items():
        if i <= i_max:
            totals[i] += n
    return totals


def matlis_check(M: GradedModule, omega: GradedModule, i_max: int,
                 resolution: Resolution | None = None) -> bool:
    """dim Ext^i(M, R) == dim Tor_i(M, omega) for i <= i_max, exactly."""
    res = resolution if resolution is not None else resolve(M, i_max + 1)
    ext = total_dims(ext_dims(M, i_max, resolution=res), i_max)
    tor = total_dims(tor_dims(M, omega, i_max, resolution=res), i_max)
    return ext == tor
