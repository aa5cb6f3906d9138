"""Interval spheres and the decomposition of cofibrant tame complexes.

Every cofibrant tame complex splits uniquely as a direct sum of interval
spheres: a degree-n sphere born at s, capped by a disk at e (never capped
when e is infinite, born already capped when s == e).  The splitting loop
below peels one interval sphere at a time, so it also produces explicit
embeddings of the summands, which the minimal-cover test needs.

Betti diagrams record the resulting multiset of (birth, death) pairs per
degree, diagonal points included.
"""

from __future__ import annotations

from tamechain.chaincx import ChainComplex, ChainMap
from tamechain.exactlin import (
    FieldMatrix,
    image_basis,
    kernel_basis,
    rank,
    solve,
    split_basis,
)
from tamechain.params import INFINITY, Param, merge_grids, param
from tamechain.tamecat import (
    MinimalCover,
    TameComplex,
    TameMap,
    direct_sum,
    is_cofibrant,
    is_fibration,
    is_weak_equivalence,
    kan_extension,
    kernel_with_inclusion,
    minimal_cover,
    refine,
    transition,
    zero_complex_tame,
)


class DecompError(ValueError):
    """Raised for invalid spheres, diagrams, or non-cofibrant inputs."""


class IntervalSphere:
    """Descriptor (n, s, e) of an interval sphere, s <= e, s finite."""

    __slots__ = ("n", "s", "e")

    def __init__(self, n: int, s, e):
        s, e = param(s), param(e)
        if n < 0:
            raise DecompError("sphere degree must be a natural number")
        if s.is_infinite:
            raise DecompError("birth must be finite")
        if e < s:
            raise DecompError(f"need s <= e, got s={s}, e={e}")
        self.n = n
        self.s = s
        self.e = e

    @property
    def is_diagonal(self) -> bool:
        return self.s == self.e

    def key(self):
        return (self.n, self.s, self.e)

    def __eq__(self, other):
        if not isinstance(other, IntervalSphere):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"IntervalSphere(n={self.n}, [{self.s}, {self.e}])"


class BettiDiagram:
    """A finite-support multiset of (birth, death) pairs for one degree."""

    __slots__ = ("counts",)

    def __init__(self, counts=None):
        data = {}
        for key, mult in dict(counts or {}).items():
            s, e = param(key[0]), param(key[1])
            if e < s:
                raise DecompError(f"diagram point with e < s: ({s}, {e})")
            if mult < 0:
                raise DecompError("multiplicities must be positive")
            if mult:
                data[(s, e)] = mult
        self.counts = data

    def points(self):
        """Sorted ((s, e), multiplicity) pairs."""
        return sorted(self.counts.items(), key=lambda kv: kv[0])

    def multiplicity(self, s, e) -> int:
        return self.counts.get((param(s), param(e)), 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def is_empty(self) -> bool:
        return not self.counts

    def without_diagonal(self) -> "BettiDiagram":
        return BettiDiagram({k: m for k, m in self.counts.items() if k[0] != k[1]})

    def diagonal_part(self) -> "BettiDiagram":
        return BettiDiagram({k: m for k, m in self.counts.items() if k[0] == k[1]})

    def added(self, s, e, mult: int = 1) -> "BettiDiagram":
        key = (param(s), param(e))
        data = dict(self.counts)
        data[key] = data.get(key, 0) + mult
        return BettiDiagram(data)

    def __eq__(self, other):
        if not isinstance(other, BettiDiagram):
            return NotImplemented
        return self.counts == other.counts

    def __hash__(self):
        return hash(tuple(self.points()))

    def __repr__(self):
        body = ", ".join(f"({s},{e})x{m}" for (s, e), m in self.points())
        return f"BettiDiagram({body})"


def diagrams_from_spheres(spheres) -> list:
    """Per-degree Betti diagrams of a multiset of interval spheres."""
    top = 0
    for sp in spheres:
        top = max(top, sp.n + 1)
    out = [BettiDiagram() for _ in range(top)]
    for sp in spheres:
        out[sp.n] = out[sp.n].added(sp.s, sp.e)
    return out


def _pad(diagrams, top):
    return list(diagrams) + [BettiDiagram()] * (top - len(diagrams))


def diagrams_equal(a, b) -> bool:
    top = max(len(a), len(b))
    return _pad(a, top) == _pad(b, top)


def diagrams_without_diagonal(diagrams) -> list:
    out = [d.without_diagonal() for d in diagrams]
    while out and out[-1].is_empty():
        out.pop()
    return out


def diagrams_agree_off_diagonal(a, b) -> bool:
    return diagrams_equal(diagrams_without_diagonal(a), diagrams_without_diagonal(b))


def diagram_spheres(diagrams) -> list:
    """The sorted multiset of interval spheres a diagram list encodes."""
    out = []
    for n, d in enumerate(diagrams):
        for (s, e), mult in d.points():
            out.extend([IntervalSphere(n, s, e)] * mult)
    return out


# -- realisation ---------------------------------------------------------------


def sphere_disk_inclusion(n: int, p: int) -> ChainMap:
    """The canonical degree-n inclusion of the sphere into the disk."""
    s = ChainComplex.sphere(n, p)
    d = ChainComplex.disk(n + 1, p)
    comps = [FieldMatrix.zeros(d.dim(m), s.dim(m), p) for m in range(n)]
    comps.append(FieldMatrix.identity(1, p))
    return ChainMap(s, d, comps)


def realize(sphere: IntervalSphere, p: int) -> TameComplex:
    """The cofibrant tame complex an interval sphere descriptor denotes."""
    if sphere.e.is_infinite:
        return kan_extension([ChainComplex.sphere(sphere.n, p)], [], [sphere.s])
    if sphere.s == sphere.e:
        return kan_extension([ChainComplex.disk(sphere.n + 1, p)], [], [sphere.s])
    inc = sphere_disk_inclusion(sphere.n, p)
    return kan_extension([inc.source, inc.target], [inc], [sphere.s, sphere.e])


# -- morphisms out of interval spheres ------------------------------------------


class SphereHomSpace:
    """A basis of the morphisms realize(sphere) -> x.

    Generators are (x_vec, y_vec) pairs: the degree-n cycle at the birth
    parameter, and (for finite death) the degree-(n+1) chain at the death
    parameter whose boundary matches.
    """

    __slots__ = ("sphere", "complex", "generators")

    def __init__(self, sphere: IntervalSphere, x: TameComplex):
        need = [sphere.s] if sphere.e.is_infinite else [sphere.s, sphere.e]
        grid = merge_grids(x.grid, need)
        x = refine(x, grid) if grid != x.grid else x
        self.sphere = sphere
        self.complex = x
        n = sphere.n
        s_idx = x.index_of(sphere.s)
        vs = x.values[s_idx]
        zb = FieldMatrix.identity(vs.dim(0), x.p) if n == 0 else \
            kernel_basis(vs.diff(n - 1))
        if sphere.e.is_infinite:
            self.generators = [(zb.take_columns([j]), None) for j in range(zb.cols)]
            return
        e_idx = x.index_of(sphere.e)
        ve = x.values[e_idx]
        tr = transition(x, sphere.s, sphere.e).component(n).mul(zb)
        d = ve.diff(n)
        _, into_z, into_y = _sphere_pullback(tr, d)
        self.generators = [(zb.mul(into_z.take_columns([j])), into_y.take_columns([j]))
                           for j in range(into_z.cols)]

    @property
    def dim(self) -> int:
        return len(self.generators)

    def map_from(self, x_vec: FieldMatrix, y_vec=None) -> TameMap:
        """The morphism with the given generator images (I(x) or I(x, y))."""
        return sphere_map(self.sphere, self.complex, x_vec, y_vec)

    def map_of(self, index: int) -> TameMap:
        x_vec, y_vec = self.generators[index]
        return self.map_from(x_vec, y_vec)

    def combination(self, coeffs) -> TameMap:
        """The morphism with the given coordinates in this basis."""
        p = self.complex.p
        n = self.sphere.n
        s_idx = self.complex.index_of(self.sphere.s)
        dx = self.complex.values[s_idx].dim(n)
        x_vec = FieldMatrix.zeros(dx, 1, p)
        y_vec = None
        if not self.sphere.e.is_infinite:
            e_idx = self.complex.index_of(self.sphere.e)
            y_vec = FieldMatrix.zeros(self.complex.values[e_idx].dim(n + 1), 1, p)
        for c, (xv, yv) in zip(coeffs, self.generators):
            x_vec = x_vec.add(xv.scale(c))
            if y_vec is not None:
                y_vec = y_vec.add(yv.scale(c))
        return self.map_from(x_vec, y_vec)


def _sphere_pullback(tr: FieldMatrix, d: FieldMatrix):
    """Pullback of Z_n X^s -> X_n^e <- X_{n+1}^e in the given presentations."""
    from tamechain.exactlin import pullback
    return pullback(tr, d)


def hom_from_sphere(sphere: IntervalSphere, x: TameComplex) -> SphereHomSpace:
    return SphereHomSpace(sphere, x)


def sphere_map(sphere: IntervalSphere, x: TameComplex, x_vec: FieldMatrix,
               y_vec=None) -> TameMap:
    """The morphism realize(sphere) -> x determined by generator images."""
    p = x.p
    need = [sphere.s] if sphere.e.is_infinite else [sphere.s, sphere.e]
    grid = merge_grids(x.grid, need)
    if grid != x.grid:
        x = refine(x, grid)
    src = refine(realize(sphere, p), grid)
    n = sphere.n
    s_idx = x.index_of(sphere.s)
    e_idx = None if sphere.e.is_infinite else x.index_of(sphere.e)
    if (x_vec.rows, x_vec.cols) != (x.values[s_idx].dim(n), 1):
        raise DecompError("birth generator image has the wrong shape")
    if e_idx is not None and (y_vec is None or
                              (y_vec.rows, y_vec.cols) != (x.values[e_idx].dim(n + 1), 1)):
        raise DecompError("death generator image has the wrong shape")
    comps = []
    for a in range(len(grid)):
        va = x.values[a]
        sa = src.values[a]
        mats = [FieldMatrix.zeros(va.dim(m), sa.dim(m), p)
                for m in range(max(sa.top, va.top))]
        if a >= s_idx:
            mats[n] = transition(x, sphere.s, grid[a]).component(n).mul(x_vec)
        if e_idx is not None and a >= e_idx:
            mats[n + 1] = transition(x, sphere.e, grid[a]).component(n + 1).mul(y_vec)
        comps.append(ChainMap(sa, va, mats))
    return TameMap(src, x, comps)


def is_cofibration_from_sphere(sphere: IntervalSphere, g: TameMap) -> bool:
    """Image-avoidance test at the birth and death parameters.

    The morphism is a cofibration exactly when the target is cofibrant, the
    birth cycle avoids the image of the transition entering s, and the death
    chain avoids the image of the transition entering e (tameness makes the
    immediately preceding grid point sufficient).
    """
    x = g.target
    if not is_cofibrant(x):
        return False
    n = sphere.n
    s_idx = x.index_of(sphere.s)
    if x.grid[s_idx] != sphere.s:
        raise DecompError("target grid does not carry the birth parameter")
    x_vec = g.components[s_idx].component(n)
    if s_idx >= 1:
        prev = x.transitions[s_idx - 1].component(n)
        if rank(prev.hstack(x_vec)) == rank(prev):
            return False
    if not sphere.e.is_infinite:
        e_idx = x.index_of(sphere.e)
        if x.grid[e_idx] != sphere.e:
            raise DecompError("target grid does not carry the death parameter")
        y_vec = g.components[e_idx].component(n + 1)
        if e_idx >= 1:
            prev = x.transitions[e_idx - 1].component(n + 1)
            if rank(prev.hstack(y_vec)) == rank(prev):
                return False
    return True


# -- the decomposition algorithm -------------------------------------------------


def _smallest_active_degree(x: TameComplex):
    best = None
    for v in x.values:
        for n, d in enumerate(v.diffs):
            if not d.is_zero():
                best = n if best is None else min(best, n)
    return best


def _split_retraction(x: TameComplex, n: int, s_idx: int, e_idx: int,
                      x_vec: FieldMatrix):
    """Functionals that retract x onto the interval sphere spanned by x_vec.

    Returns per-grid-point rows (psi_n, psi_{n+1}); existence is guaranteed
    by the minimality of the birth index.
    """
    p = x.p
    rows_n = {}
    one = FieldMatrix.identity(1, p)
    if s_idx >= 1:
        prev = x.transitions[s_idx - 1].component(n)
        m = x_vec.hstack(prev).transpose()
        rhs = one.vstack(FieldMatrix.zeros(prev.cols, 1, p))
    else:
        m = x_vec.transpose()
        rhs = one
    psi_t = solve(m, rhs)
    if psi_t is None:
        raise DecompError("retraction functional does not exist; "
                          "the birth index was not minimal")
    rows_n[s_idx] = psi_t.transpose()
    for a in range(s_idx + 1, len(x.grid)):
        tr = x.transitions[a - 1].component(n)
        nxt = solve(tr.transpose(), rows_n[a - 1].transpose())
        if nxt is None:
            raise DecompError("functional extension failed on a mono transition")
        rows_n[a] = nxt.transpose()
    rows_n1 = {}
    for a in range(e_idx, len(x.grid)):
        rows_n1[a] = rows_n[a].mul(x.values[a].diff(n))
    return rows_n, rows_n1


def _split_off_sphere(x: TameComplex, n: int, s_idx: int, e_idx: int,
                      x_vec: FieldMatrix, y_vec: FieldMatrix):
    """One step of the structure theorem: x = sphere (+) kernel of retraction."""
    p = x.p
    sphere = IntervalSphere(n, x.grid[s_idx], x.grid[e_idx])
    embed = sphere_map(sphere, x, x_vec, y_vec)
    rows_n, rows_n1 = _split_retraction(x, n, s_idx, e_idx, x_vec)
    src = embed.source
    comps = []
    for a in range(len(x.grid)):
        va = x.values[a]
        sa = src.values[a]
        mats = [FieldMatrix.zeros(sa.dim(m), va.dim(m), p)
                for m in range(max(sa.top, va.top))]
        if a >= s_idx:
            mats[n] = rows_n[a]
        if a >= e_idx:
            mats[n + 1] = rows_n1[a]
        comps.append(ChainMap(va, sa, mats))
    retraction = TameMap(x, src, comps)
    check = retraction.compose(embed)
    if check != TameMap.identity(src):
        raise DecompError("retraction does not split the embedded sphere")
    rest, incl = kernel_with_inclusion(retraction)
    return sphere, embed, rest, incl


def _trivial_differential_summands(x: TameComplex):
    """Base case: read off degree-n spheres from transition cokernels."""
    out = []
    p = x.p
    for a in range(len(x.grid)):
        va = x.values[a]
        for n in range(va.top):
            if a == 0:
                gens = FieldMatrix.identity(va.dim(n), p)
            else:
                tr = x.transitions[a - 1].component(n)
                im = image_basis(tr) if tr.cols else FieldMatrix.zeros(va.dim(n), 0, p)
                _, _, gens = split_basis(im, va.dim(n))
            for j in range(gens.cols):
                sphere = IntervalSphere(n, x.grid[a], INFINITY)
                out.append((sphere, sphere_map(sphere, x, gens.take_columns([j]))))
    return out


def decompose_cofibrant_with_summands(x: TameComplex):
    """Split a cofibrant complex into interval spheres with embeddings.

    Returns a list of (sphere, embedding) pairs; the embeddings land in the
    original x.  The multiset of spheres is unique; the embeddings depend on
    the deterministic pivot choices.
    """
    if not is_cofibrant(x):
        raise DecompError("decomposition requires a cofibrant complex")
    x_cur = x
    into_orig = TameMap.identity(x)
    result = []
    while True:
        n = _smallest_active_degree(x_cur)
        if n is None:
            break
        e_idx = None
        for a in range(len(x_cur.grid)):
            if not x_cur.values[a].diff(n).is_zero():
                e_idx = a
                break
        d = x_cur.values[e_idx].diff(n)
        dim_e = x_cur.values[e_idx].dim(n)
        s_idx = None
        inter = None
        for a in range(e_idx + 1):
            tr = transition(x_cur, x_cur.grid[a], x_cur.grid[e_idx]).component(n)
            if rank(tr) + rank(d) > rank(tr.hstack(d)):
                pairs = kernel_basis(tr.hstack(d.neg()))
                cand = tr.mul(pairs.take_rows(range(tr.cols)))
                inter = image_basis(cand)
                s_idx = a
                break
        if s_idx is None:
            raise DecompError("no birth index found for a nonzero differential")
        v = inter.take_columns([0])
        tr = transition(x_cur, x_cur.grid[s_idx], x_cur.grid[e_idx]).component(n)
        x_vec = solve(tr, v)
        y_vec = solve(d, v)
        if x_vec is None or y_vec is None:
            raise DecompError("intersection vector lost its preimages")
        sphere, embed, rest, incl = _split_off_sphere(
            x_cur, n, s_idx, e_idx, x_vec, y_vec)
        result.append((sphere, into_orig.compose(embed)))
        x_cur = rest
        into_orig = into_orig.compose(incl)
    for sphere, embed in _trivial_differential_summands(x_cur):
        result.append((sphere, into_orig.compose(embed)))
    result.sort(key=lambda pair: pair[0].key())
    return result


def decompose_cofibrant(x: TameComplex) -> list:
    """Per-degree Betti diagrams of a cofibrant complex."""
    return diagrams_from_spheres(
        [sp for sp, _ in decompose_cofibrant_with_summands(x)])


# -- Betti diagrams of arbitrary objects -----------------------------------------


def betti(x: TameComplex) -> list:
    """Betti diagrams: the decomposition of the minimal cover."""
    return decompose_cofibrant(minimal_cover(x).cover)


def min_betti(x: TameComplex) -> list:
    """Minimal Betti diagrams: the diagonal is dropped."""
    return diagrams_without_diagonal(betti(x))


def rebuild_from_betti(diagrams, p: int) -> TameComplex:
    """The direct sum of interval spheres a diagram list encodes."""
    return rebuild_with_layout(diagrams, p)[0]


def rebuild_with_layout(diagrams, p: int):
    """Rebuild with the summand embeddings and projections exposed."""
    spheres = diagram_spheres(diagrams)
    finite_pts = []
    for sp in spheres:
        finite_pts.append(sp.s)
        if not sp.e.is_infinite:
            finite_pts.append(sp.e)
    grid = merge_grids(finite_pts)
    if not spheres:
        return zero_complex_tame(grid, p), []
    parts = [refine(realize(sp, p), grid) for sp in spheres]
    total = parts[0]
    for extra in parts[1:]:
        total = direct_sum(total, extra)
    layout = []
    for idx, (sp, part) in enumerate(zip(spheres, parts)):
        inc_comps, prj_comps = [], []
        for a in range(len(grid)):
            va = total.values[a]
            pa = part.values[a]
            mats_i, mats_p = [], []
            for m in range(max(va.top, pa.top)):
                block = FieldMatrix.zeros(va.dim(m), pa.dim(m), p)
                off = sum(q.values[a].dim(m) for q in parts[:idx])
                ent = [0] * (va.dim(m) * pa.dim(m))
                for j in range(pa.dim(m)):
                    ent[(off + j) * pa.dim(m) + j] = 1
                mats_i.append(FieldMatrix(va.dim(m), pa.dim(m), ent, p))
                ent_p = [0] * (pa.dim(m) * va.dim(m))
                for j in range(pa.dim(m)):
                    ent_p[j * va.dim(m) + off + j] = 1
                mats_p.append(FieldMatrix(pa.dim(m), va.dim(m), ent_p, p))
            inc_comps.append(ChainMap(pa, va, mats_i))
            prj_comps.append(ChainMap(va, pa, mats_p))
        layout.append((sp, TameMap(part, total, inc_comps),
                       TameMap(total, part, prj_comps)))
    return total, layout


def minimal_representative_tame(x: TameComplex) -> TameComplex:
    """The rebuild of the minimal Betti diagrams: no diagonal summands."""
    return rebuild_from_betti(min_betti(x), x.p)


# -- minimality tests --------------------------------------------------------------


def is_minimal(x: TameComplex) -> bool:
    """Cofibrant with no diagonal point in the decomposition."""
    if not is_cofibrant(x):
        return False
    return all(d.diagonal_part().is_empty() for d in decompose_cofibrant(x))


def is_minimal_cover(c: MinimalCover) -> bool:
    """Cofibrant source, acyclic fibration, no diagonal summand killed."""
    if not is_cofibrant(c.cover):
        return False
    if not (is_fibration(c.map) and is_weak_equivalence(c.map)):
        return False
    for sphere, embed in decompose_cofibrant_with_summands(c.cover):
        if sphere.is_diagonal and c.map.compose(embed).is_zero():
            return False
    return True
