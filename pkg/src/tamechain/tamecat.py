"""Tame [0, oo)-parametrised chain complexes.

A tame object is stored on a finite exact grid 0 = t_0 < ... < t_k with one
compact complex per grid point and transition chain maps between consecutive
points; its value at any parameter is the value at the largest grid point
below.  Morphisms are grid-aligned ladders.  This module provides Kan
extensions, grid refinement, the pushout factorisation, the model-structure
predicates, minimal factorisations and minimal covers, and the parameterwise
constructions (sums, kernels, quotients, cofibers, suspension, lifts).
"""

from __future__ import annotations

from tamechain.chaincx import (
    ChainComplex,
    ChainMap,
    HomotopySquare,
    cofiber,
    cofiber_map,
    is_weak_equivalence_chain,
    kernel_complex,
    lift_through_acyclic_fibration,
    minimal_factorisation_chain,
    pushout_complex,
    pushout_factor,
    suspend,
    suspend_map,
)
from tamechain.exactlin import FieldMatrix, image_basis, rank, solve, split_basis
from tamechain.params import ZERO, merge_grids, param


class TameError(ValueError):
    """Raised when grids, ladders or tame invariants are violated."""


def _check_grid(grid) -> tuple:
    pts = tuple(param(t) for t in grid)
    if not pts:
        raise TameError("grid must be nonempty")
    for t in pts:
        if t.is_infinite:
            raise TameError("grid points must be finite")
    for a in range(1, len(pts)):
        if not pts[a - 1] < pts[a]:
            raise TameError(f"grid is not strictly increasing at index {a}")
    return pts


class TameComplex:
    """A tame parametrised chain complex on an explicit grid starting at 0."""

    __slots__ = ("grid", "values", "transitions")

    def __init__(self, grid, values, transitions, check: bool = True):
        self.grid = _check_grid(grid)
        if self.grid[0] != ZERO:
            raise TameError("grid must start at 0; Kan-extend to normalise")
        self.values = tuple(values)
        self.transitions = tuple(transitions)
        if len(self.values) != len(self.grid):
            raise TameError("one value per grid point required")
        if len(self.transitions) != len(self.grid) - 1:
            raise TameError("one transition per consecutive grid pair required")
        if check:
            err = self.violations()
            if err:
                raise TameError(err[0])

    def violations(self) -> list:
        out = []
        p = self.p
        for a, v in enumerate(self.values):
            if v.p != p:
                out.append(f"value at grid index {a} uses modulus {v.p}, expected {p}")
            for msg in v.violations():
                out.append(f"value at grid index {a}: {msg}")
        for a, t in enumerate(self.transitions):
            if t.source != self.values[a] or t.target != self.values[a + 1]:
                out.append(f"transition {a + 1} endpoints do not match the grid values")
                continue
            for msg in t.violations():
                out.append(f"transition {a + 1}: {msg}")
        return out

    @property
    def p(self) -> int:
        return self.values[0].p

    @property
    def k(self) -> int:
        return len(self.grid) - 1

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def total_dim(self) -> int:
        return sum(v.total_dim() for v in self.values)

    def index_of(self, t) -> int:
        t = param(t)
        if t.is_infinite:
            return len(self.grid) - 1
        idx = -1
        for a, g in enumerate(self.grid):
            if g <= t:
                idx = a
        if idx < 0:
            raise TameError(f"parameter {t} below the grid start")
        return idx

    def __eq__(self, other):
        if not isinstance(other, TameComplex):
            return NotImplemented
        return (self.grid, self.values, self.transitions) == \
            (other.grid, other.values, other.transitions)

    def __hash__(self):
        return hash((self.grid, self.values, self.transitions))

    def __repr__(self):
        pts = ", ".join(str(t) for t in self.grid)
        return f"TameComplex(grid=[{pts}], dims={[v.dims for v in self.values]})"


class TameMap:
    """A natural transformation between tame complexes on one shared grid."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: TameComplex, target: TameComplex, components,
                 check: bool = True):
        if source.grid != target.grid:
            raise TameError("tame maps need a common grid; refine first")
        self.source = source
        self.target = target
        self.components = tuple(components)
        if len(self.components) != len(source.grid):
            raise TameError("one component per grid point required")
        if check:
            err = self.violations()
            if err:
                raise TameError(err[0])

    def violations(self) -> list:
        out = []
        for a, c in enumerate(self.components):
            if c.source != self.source.values[a] or c.target != self.target.values[a]:
                out.append(f"component at grid index {a} has wrong endpoints")
                continue
            for msg in c.violations():
                out.append(f"component at grid index {a}: {msg}")
        if out:
            return out
        for a in range(1, len(self.components)):
            lhs = self.components[a].compose(self.source.transitions[a - 1])
            rhs = self.target.transitions[a - 1].compose(self.components[a - 1])
            if lhs != rhs:
                out.append(f"ladder square at grid index {a} does not commute")
        return out

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def grid(self) -> tuple:
        return self.source.grid

    @classmethod
    def identity(cls, x: TameComplex) -> "TameMap":
        return cls(x, x, [ChainMap.identity(v) for v in x.values], check=False)

    @classmethod
    def zero(cls, source: TameComplex, target: TameComplex) -> "TameMap":
        return cls(source, target,
                   [ChainMap.zero(s, t) for s, t in zip(source.values, target.values)],
                   check=False)

    def compose(self, first: "TameMap") -> "TameMap":
        if first.target != self.source:
            raise TameError("tame composition endpoint mismatch")
        return TameMap(first.source, self.target,
                       [a.compose(b) for a, b in zip(self.components, first.components)],
                       check=False)

    def add(self, other: "TameMap") -> "TameMap":
        return TameMap(self.source, self.target,
                       [a.add(b) for a, b in zip(self.components, other.components)],
                       check=False)

    def sub(self, other: "TameMap") -> "TameMap":
        return TameMap(self.source, self.target,
                       [a.sub(b) for a, b in zip(self.components, other.components)],
                       check=False)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, TameMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    def __repr__(self):
        return f"TameMap(grid size {len(self.grid)}, p={self.p})"


class TameFactorisation:
    """The canonical pushout factorisation g = ghat gbar through q."""

    __slots__ = ("gbar", "q", "ghat")

    def __init__(self, gbar: TameMap, q: TameComplex, ghat: TameMap):
        self.gbar = gbar
        self.q = q
        self.ghat = ghat


class MinimalCover:
    """A cofibrant cover with its acyclic-fibration map onto the object."""

    __slots__ = ("cover", "map")

    def __init__(self, cover: TameComplex, map: TameMap):
        self.cover = cover
        self.map = map


# -- construction and reshaping ----------------------------------------------


def zero_complex_tame(grid, p: int) -> TameComplex:
    grid = _check_grid(grid)
    z = ChainComplex.zero(p)
    return TameComplex(grid, [z] * len(grid), [ChainMap.identity(z)] * (len(grid) - 1),
                       check=False)


def kan_extension(values, maps, grid) -> TameComplex:
    """Extend a finite diagram to [0, oo); zero below the first grid point.

    The grid is normalised to start at 0 by prepending the zero complex.
    """
    values = list(values)
    maps = list(maps)
    grid = list(_check_grid(grid))
    if len(values) != len(grid):
        raise TameError("need one value per grid point")
    if len(maps) != len(grid) - 1:
        raise TameError("need one map per consecutive grid pair")
    p = values[0].p
    if grid[0] != ZERO:
        z = ChainComplex.zero(p)
        values.insert(0, z)
        maps.insert(0, ChainMap.zero(z, values[1]))
        grid.insert(0, ZERO)
    return TameComplex(grid, values, maps)


def evaluate(x: TameComplex, t) -> ChainComplex:
    return x.values[x.index_of(t)]


def transition(x: TameComplex, s, t) -> ChainMap:
    """The composite transition from parameter s to parameter t."""
    s, t = param(s), param(t)
    if t < s:
        raise TameError(f"transition requested backwards from {s} to {t}")
    if s.is_infinite or t.is_infinite:
        raise TameError("transitions are between finite parameters")
    a, b = x.index_of(s), x.index_of(t)
    acc = ChainMap.identity(x.values[a])
    for c in range(a, b):
        acc = x.transitions[c].compose(acc)
    return acc


def refine(x: TameComplex, grid2) -> TameComplex:
    """Reindex x on a refinement of its grid; inserted points carry identities."""
    grid2 = _check_grid(grid2)
    if not set(x.grid) <= set(grid2):
        raise TameError("new grid is not a refinement")
    values = [evaluate(x, t) for t in grid2]
    transitions = [transition(x, grid2[a - 1], grid2[a]) for a in range(1, len(grid2))]
    return TameComplex(grid2, values, transitions, check=False)


def refine_map(g: TameMap, grid2) -> TameMap:
    src = refine(g.source, grid2)
    tgt = refine(g.target, grid2)
    comps = [g.components[g.source.index_of(t)] for t in grid2]
    return TameMap(src, tgt, comps, check=False)


def common_grid(x: TameComplex, y: TameComplex):
    merged = merge_grids(x.grid, y.grid)
    return refine(x, merged), refine(y, merged)


def align_maps(*maps: TameMap):
    """Refine several tame maps to one merged grid."""
    merged = merge_grids(*[g.grid for g in maps])
    return tuple(refine_map(g, merged) for g in maps)


# -- the pushout factorisation -------------------------------------------------


def factorise(g: TameMap) -> TameFactorisation:
    """The inductive factorisation g = ghat gbar with pushout middles."""
    x, y = g.source, g.target
    k = len(g.grid)
    q_values = [x.values[0]]
    gbar_comps = [ChainMap.identity(x.values[0])]
    ghat_comps = [g.components[0]]
    q_transitions = []
    for a in range(1, k):
        q, from_xa, from_yprev = pushout_complex(x.transitions[a - 1],
                                                 g.components[a - 1])
        ghat = pushout_factor(from_xa, from_yprev, g.components[a],
                              y.transitions[a - 1])
        q_values.append(q)
        gbar_comps.append(from_xa)
        ghat_comps.append(ghat)
        q_transitions.append(from_yprev.compose(ghat_comps[a - 1]))
    q = TameComplex(g.grid, q_values, q_transitions)
    gbar = TameMap(x, q, gbar_comps)
    ghat = TameMap(q, y, ghat_comps)
    return TameFactorisation(gbar, q, ghat)


# -- model structure predicates -------------------------------------------------


def is_weak_equivalence(g: TameMap) -> bool:
    """Homology isomorphism at every grid point."""
    return all(is_weak_equivalence_chain(c) for c in g.components)


def is_fibration(g: TameMap) -> bool:
    """Degreewise epi in degrees >= 1 at every grid point."""
    return all(c.is_epi_positive_degrees() for c in g.components)


def is_acyclic_fibration(g: TameMap) -> bool:
    return is_fibration(g) and is_weak_equivalence(g)


def is_cofibration(g: TameMap) -> bool:
    """Degreewise mono everywhere with pullback ladder squares."""
    if not all(c.is_mono() for c in g.components):
        return False
    x, y = g.source, g.target
    for a in range(1, len(g.grid)):
        xa, xp = x.values[a], x.values[a - 1]
        ya, yp = y.values[a], y.values[a - 1]
        for n in range(max(xa.top, xp.top, ya.top, yp.top)):
            stacked = g.components[a].component(n).hstack(
                y.transitions[a - 1].component(n))
            pdim = xa.dim(n) + yp.dim(n) - rank(stacked)
            if pdim != xp.dim(n):
                return False
    return True


def is_cofibrant(x: TameComplex) -> bool:
    """All transitions degreewise mono."""
    return all(t.is_mono() for t in x.transitions)


# -- parameterwise constructions ------------------------------------------------


def direct_sum(x: TameComplex, y: TameComplex) -> TameComplex:
    x, y = common_grid(x, y)
    values = [a.direct_sum(b) for a, b in zip(x.values, y.values)]
    transitions = [a.direct_sum(b) for a, b in zip(x.transitions, y.transitions)]
    return TameComplex(x.grid, values, transitions, check=False)


def kernel_with_inclusion(g: TameMap):
    values, inclusions = [], []
    for c in g.components:
        w, j = kernel_complex(c)
        values.append(w)
        inclusions.append(j)
    transitions = []
    for a in range(1, len(g.grid)):
        lifted = g.source.transitions[a - 1].compose(inclusions[a - 1])
        comps = []
        for n in range(max(values[a - 1].top, values[a].top)):
            t = solve(inclusions[a].component(n), lifted.component(n))
            if t is None:
                raise TameError("kernel is not preserved by a transition")
            comps.append(t)
        transitions.append(ChainMap(values[a - 1], values[a], comps))
    w = TameComplex(g.grid, values, transitions)
    return w, TameMap(w, g.source, inclusions)


def kernel(g: TameMap) -> TameComplex:
    return kernel_with_inclusion(g)[0]


def quotient_with_projection(g: TameMap):
    """The cokernel of a degreewise mono tame map, with its projection."""
    if not all(c.is_mono() for c in g.components):
        raise TameError("quotient requires a degreewise mono map")
    y = g.target
    p = g.p
    projs, sects = [], []
    for c in g.components:
        pr_n, se_n = [], []
        for n in range(c.target.top):
            im = image_basis(c.component(n))
            _, proj, sect = split_basis(im, c.target.dim(n))
            pr_n.append(proj)
            se_n.append(sect)
        projs.append(pr_n)
        sects.append(se_n)
    values = []
    for a, yv in enumerate(y.values):
        dims = [m.rows for m in projs[a]]
        diffs = [projs[a][n].mul(yv.diff(n)).mul(sects[a][n + 1])
                 for n in range(len(dims) - 1)]
        values.append(ChainComplex(dims, diffs, p, check=False))
    transitions = []
    for a in range(1, len(g.grid)):
        tr = y.transitions[a - 1]
        comps = []
        for n in range(max(values[a - 1].top, values[a].top)):
            if n < len(projs[a]) and n < len(sects[a - 1]):
                comps.append(projs[a][n].mul(tr.component(n)).mul(sects[a - 1][n]))
            else:
                comps.append(FieldMatrix.zeros(values[a].dim(n),
                                               values[a - 1].dim(n), p))
        transitions.append(ChainMap(values[a - 1], values[a], comps))
    q = TameComplex(g.grid, values, transitions)
    proj_comps = [ChainMap(y.values[a], values[a], projs[a], check=False)
                  for a in range(len(g.grid))]
    return q, TameMap(y, q, proj_comps)


def quotient(g: TameMap) -> TameComplex:
    return quotient_with_projection(g)[0]


def tame_suspend(x: TameComplex) -> TameComplex:
    return TameComplex(x.grid, [suspend(v) for v in x.values],
                       [suspend_map(t) for t in x.transitions], check=False)


def tame_cofiber(g: TameMap):
    """Parameterwise cofiber with its inclusion and projection ladders."""
    datas = [cofiber(c) for c in g.components]
    values = [d.cofiber for d in datas]
    transitions = []
    for a in range(1, len(g.grid)):
        square = HomotopySquare(g.components[a - 1], g.components[a],
                                g.source.transitions[a - 1],
                                g.target.transitions[a - 1])
        transitions.append(cofiber_map(square))
    cg = TameComplex(g.grid, values, transitions)
    i = TameMap(g.target, cg, [d.inclusion for d in datas])
    sx = tame_suspend(g.source)
    pr = TameMap(cg, sx, [d.projection for d in datas])
    return cg, i, pr


def tame_cofiber_map(f: TameMap, g: TameMap, alpha: TameMap, beta: TameMap) -> TameMap:
    """The induced map Cf -> Cg of a strictly commutative square of ladders."""
    cf, _, _ = tame_cofiber(f)
    cg, _, _ = tame_cofiber(g)
    comps = []
    for a in range(len(f.grid)):
        square = HomotopySquare(f.components[a], g.components[a],
                                alpha.components[a], beta.components[a])
        comps.append(cofiber_map(square))
    return TameMap(cf, cg, comps)


# -- minimal factorisations ------------------------------------------------------


def minimal_factorisation_tame(g: TameMap):
    """Factor g as a cofibration followed by an acyclic fibration, minimally.

    At the base point this is the chain-level minimal factorisation; at each
    later point the chain-level pushout is followed by a minimal
    factorisation of the induced comparison map.
    """
    a_cx, x_cx = g.source, g.target
    alphas, betas, mid_values, mid_transitions = [], [], [], []
    al0, be0 = minimal_factorisation_chain(g.components[0])
    alphas.append(al0)
    betas.append(be0)
    mid_values.append(al0.target)
    for a in range(1, len(g.grid)):
        q, from_aa, from_yprev = pushout_complex(a_cx.transitions[a - 1],
                                                 alphas[a - 1])
        beta_prime = pushout_factor(
            from_aa, from_yprev, g.components[a],
            x_cx.transitions[a - 1].compose(betas[a - 1]))
        al2, be2 = minimal_factorisation_chain(beta_prime)
        alphas.append(al2.compose(from_aa))
        betas.append(be2)
        mid_values.append(al2.target)
        mid_transitions.append(al2.compose(from_yprev))
    mid = TameComplex(g.grid, mid_values, mid_transitions)
    alpha = TameMap(a_cx, mid, alphas)
    beta = TameMap(mid, x_cx, betas)
    return alpha, mid, beta


def minimal_cover(x: TameComplex) -> MinimalCover:
    """The minimal factorisation of the map from the zero object into x."""
    z = zero_complex_tame(x.grid, x.p)
    _, mid, beta = minimal_factorisation_tame(TameMap.zero(z, x))
    return MinimalCover(mid, beta)


# -- lifting -----------------------------------------------------------------------


def tame_lift(alpha: TameMap, beta: TameMap, u: TameMap, v: TameMap) -> TameMap:
    """Fill a commutative square of ladders against an acyclic fibration.

    ``alpha`` must be a cofibration, ``beta`` a fibration and weak
    equivalence, ``beta u == v alpha``; all four share one grid.  Built grid
    point by grid point through chain-level pushouts and lifts.
    """
    if not (alpha.grid == beta.grid == u.grid == v.grid):
        raise TameError("lifting square must live on one grid; refine first")
    a_cx, b_cx = alpha.source, alpha.target
    e_cx = beta.source
    comps = [lift_through_acyclic_fibration(alpha.components[0], beta.components[0],
                                            u.components[0], v.components[0])]
    for a in range(1, len(alpha.grid)):
        q, from_aa, from_bprev = pushout_complex(a_cx.transitions[a - 1],
                                                 alpha.components[a - 1])
        qhat = pushout_factor(from_aa, from_bprev, alpha.components[a],
                              b_cx.transitions[a - 1])
        phi_prime = pushout_factor(from_aa, from_bprev, u.components[a],
                                   e_cx.transitions[a - 1].compose(comps[a - 1]))
        comps.append(lift_through_acyclic_fibration(
            qhat, beta.components[a], phi_prime, v.components[a]))
    return TameMap(b_cx, e_cx, comps)
