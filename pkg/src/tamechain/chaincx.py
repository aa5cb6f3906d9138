"""Compact non-negatively graded chain complexes over F_p.

Provides homology, suspension and desuspension, cones, path complexes,
cofiber sequences, the comparison morphism, the standard decomposition,
minimal representatives, minimal factorisations of chain maps, and the
lifting engine used by every parametrised construction downstream.

Sign conventions follow the displayed block matrices (the -delta blocks are
kept even over F_2 so the code is correct for every prime).
"""

from __future__ import annotations

from tamechain.exactlin import (
    ExactLinError,
    FieldMatrix,
    image_basis,
    inverse,
    kernel_basis,
    rank,
    solve,
    split_basis,
)


class ChainError(ValueError):
    """Raised when chain-complex or chain-map invariants fail."""


def _trim(dims) -> tuple:
    dims = list(dims)
    while dims and dims[-1] == 0:
        dims.pop()
    return tuple(dims)


class ChainComplex:
    """Differentials ``diff(n): X_{n+1} -> X_n`` with ``diff(n) @ diff(n+1) == 0``."""

    __slots__ = ("p", "dims", "diffs")

    def __init__(self, dims, diffs, p: int, check: bool = True):
        self.p = p
        self.dims = _trim(dims)
        top = len(self.dims)
        diffs = list(diffs)[:max(top - 1, 0)]
        while len(diffs) < max(top - 1, 0):
            n = len(diffs)
            diffs.append(FieldMatrix.zeros(self.dims[n], self.dims[n + 1], p))
        self.diffs = tuple(diffs)
        if check:
            err = self.violations()
            if err:
                raise ChainError(err[0])

    def violations(self) -> list:
        out = []
        for n, d in enumerate(self.diffs):
            if (d.rows, d.cols) != (self.dims[n], self.dims[n + 1]):
                out.append(f"differential at degree {n} has shape "
                           f"{d.rows}x{d.cols}, expected {self.dims[n]}x{self.dims[n + 1]}")
            if d.p != self.p:
                out.append(f"differential at degree {n} has modulus {d.p}, expected {self.p}")
        for n in range(len(self.diffs) - 1):
            if not out and not self.diffs[n].mul(self.diffs[n + 1]).is_zero():
                out.append(f"differential identity fails at degree {n}: d_{n} d_{n + 1} != 0")
        return out

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n < len(self.dims) else 0

    def diff(self, n: int) -> FieldMatrix:
        if 0 <= n < len(self.diffs):
            return self.diffs[n]
        return FieldMatrix.zeros(self.dim(n), self.dim(n + 1), self.p)

    @property
    def top(self) -> int:
        """One past the highest degree carrying a nonzero space."""
        return len(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return not self.dims

    def has_trivial_differentials(self) -> bool:
        return all(d.is_zero() for d in self.diffs)

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (self.p, self.dims, self.diffs) == (other.p, other.dims, other.diffs)

    def __hash__(self):
        return hash((self.p, self.dims, self.diffs))

    def __repr__(self):
        return f"ChainComplex(dims={self.dims}, p={self.p})"

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "ChainComplex":
        return cls((), (), p)

    @classmethod
    def sphere(cls, n: int, p: int) -> "ChainComplex":
        """One copy of the field concentrated in degree n."""
        return cls((0,) * n + (1,), (), p, check=False)

    @classmethod
    def disk(cls, n: int, p: int) -> "ChainComplex":
        """The acyclic complex with identity differential in degrees n-1, n."""
        if n < 1:
            raise ChainError("disks exist in degrees >= 1")
        dims = (0,) * (n - 1) + (1, 1)
        diffs = [FieldMatrix.zeros(dims[m], dims[m + 1], p) for m in range(n - 1)]
        diffs.append(FieldMatrix.identity(1, p))
        return cls(dims, diffs[:len(dims) - 1], p, check=False)

    @classmethod
    def graded(cls, dims, p: int) -> "ChainComplex":
        """A graded vector space viewed as a complex with zero differentials."""
        return cls(dims, (), p, check=False)

    def direct_sum(self, other: "ChainComplex") -> "ChainComplex":
        top = max(self.top, other.top)
        dims = [self.dim(n) + other.dim(n) for n in range(top)]
        diffs = [FieldMatrix.block_diag([self.diff(n), other.diff(n)], self.p)
                 for n in range(top - 1)]
        return ChainComplex(dims, diffs, self.p, check=False)


class ChainMap:
    """Degreewise linear maps commuting with the differentials."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: ChainComplex, target: ChainComplex, components,
                 check: bool = True):
        if source.p != target.p:
            raise ChainError("source and target over different fields")
        self.source = source
        self.target = target
        top = max(source.top, target.top)
        comps = list(components)[:top]
        while len(comps) < top:
            n = len(comps)
            comps.append(FieldMatrix.zeros(target.dim(n), source.dim(n), source.p))
        self.components = tuple(comps)
        if check:
            err = self.violations()
            if err:
                raise ChainError(err[0])

    def violations(self) -> list:
        out = []
        for n, c in enumerate(self.components):
            if (c.rows, c.cols) != (self.target.dim(n), self.source.dim(n)):
                out.append(f"component at degree {n} has shape {c.rows}x{c.cols}, "
                           f"expected {self.target.dim(n)}x{self.source.dim(n)}")
        if out:
            return out
        for n in range(max(self.source.top, self.target.top)):
            lhs = self.component(n).mul(self.source.diff(n))
            rhs = self.target.diff(n).mul(self.component(n + 1))
            if lhs != rhs:
                out.append(f"chain-map square fails between degrees {n + 1} and {n}")
        return out

    def component(self, n: int) -> FieldMatrix:
        if 0 <= n < len(self.components):
            return self.components[n]
        return FieldMatrix.zeros(self.target.dim(n), self.source.dim(n), self.source.p)

    @property
    def p(self) -> int:
        return self.source.p

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    def __hash__(self):
        return hash((self.source, self.target, self.components))

    def __repr__(self):
        return f"ChainMap({self.source.dims} -> {self.target.dims}, p={self.p})"

    # -- algebra -----------------------------------------------------------

    @classmethod
    def identity(cls, x: ChainComplex) -> "ChainMap":
        return cls(x, x, [FieldMatrix.identity(d, x.p) for d in x.dims], check=False)

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return cls(source, target, (), check=False)

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self after first."""
        if first.target != self.source:
            raise ChainError("composition endpoint mismatch")
        top = max(first.source.top, self.target.top)
        comps = [self.component(n).mul(first.component(n)) for n in range(top)]
        return ChainMap(first.source, self.target, comps, check=False)

    def add(self, other: "ChainMap") -> "ChainMap":
        if self.source != other.source or self.target != other.target:
            raise ChainError("sum endpoint mismatch")
        comps = [a.add(b) for a, b in zip(self.components, other.components)]
        return ChainMap(self.source, self.target, comps, check=False)

    def sub(self, other: "ChainMap") -> "ChainMap":
        return self.add(other.neg())

    def neg(self) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        [c.neg() for c in self.components], check=False)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_mono(self) -> bool:
        return all(rank(self.component(n)) == self.source.dim(n)
                   for n in range(self.source.top))

    def is_epi_positive_degrees(self) -> bool:
        return all(rank(self.component(n)) == self.target.dim(n)
                   for n in range(1, self.target.top))

    def is_iso(self) -> bool:
        return (self.source.dims == self.target.dims
                and all(rank(c) == c.rows == c.cols for c in self.components))

    def stack_into_sum(self, other: "ChainMap") -> "ChainMap":
        """[self; other]: A -> X (+) Y from self: A -> X and other: A -> Y."""
        if self.source != other.source:
            raise ChainError("stack source mismatch")
        tgt = self.target.direct_sum(other.target)
        top = max(self.source.top, tgt.top)
        comps = [self.component(n).vstack(other.component(n)) for n in range(top)]
        return ChainMap(self.source, tgt, comps, check=False)

    def glue_from_sum(self, other: "ChainMap") -> "ChainMap":
        """[self | other]: X (+) Y -> A from self: X -> A and other: Y -> A."""
        if self.target != other.target:
            raise ChainError("glue target mismatch")
        src = self.source.direct_sum(other.source)
        top = max(src.top, self.target.top)
        comps = [self.component(n).hstack(other.component(n)) for n in range(top)]
        return ChainMap(src, self.target, comps, check=False)

    def direct_sum(self, other: "ChainMap") -> "ChainMap":
        src = self.source.direct_sum(other.source)
        tgt = self.target.direct_sum(other.target)
        top = max(src.top, tgt.top)
        comps = [FieldMatrix.block_diag([self.component(n), other.component(n)], self.p)
                 for n in range(top)]
        return ChainMap(src, tgt, comps, check=False)


def sum_injections(x: ChainComplex, y: ChainComplex):
    """Inclusions and projections of the direct sum x (+) y."""
    s = x.direct_sum(y)
    p = x.p
    inc_x, inc_y, pr_x, pr_y = [], [], [], []
    for n in range(s.top):
        dx, dy = x.dim(n), y.dim(n)
        ix = FieldMatrix.identity(dx, p)
        iy = FieldMatrix.identity(dy, p)
        inc_x.append(ix.vstack(FieldMatrix.zeros(dy, dx, p)))
        inc_y.append(FieldMatrix.zeros(dx, dy, p).vstack(iy))
        pr_x.append(ix.hstack(FieldMatrix.zeros(dx, dy, p)))
        pr_y.append(FieldMatrix.zeros(dy, dx, p).hstack(iy))
    return (s,
            ChainMap(x, s, inc_x, check=False), ChainMap(y, s, inc_y, check=False),
            ChainMap(s, x, pr_x, check=False), ChainMap(s, y, pr_y, check=False))


# -- homology ---------------------------------------------------------------


class HomologyData:
    """Cycle and boundary bases with a chosen section of the quotient.

    ``cycles[n]`` and ``boundaries[n]`` are column bases inside X_n;
    ``proj[n]`` and ``sect[n]`` express the quotient Z_n -> H_n and its
    section in cycle coordinates, with ``proj @ sect == 1``.
    """

    __slots__ = ("complex", "cycles", "boundaries", "h_dims", "proj", "sect")

    def __init__(self, x: ChainComplex):
        self.complex = x
        self.cycles = []
        self.boundaries = []
        self.h_dims = []
        self.proj = []
        self.sect = []
        for n in range(x.top):
            if n == 0:
                z = FieldMatrix.identity(x.dim(0), x.p)
            else:
                z = kernel_basis(x.diff(n - 1))
            b = image_basis(x.diff(n))
            b_in_z = solve(z, b)
            if b_in_z is None:
                raise ChainError("boundaries do not lie inside cycles")
            _, proj, sect = split_basis(b_in_z, z.cols)
            self.cycles.append(z)
            self.boundaries.append(b)
            self.h_dims.append(z.cols - b.cols)
            self.proj.append(proj)
            self.sect.append(sect)

    def h_complex(self) -> ChainComplex:
        return ChainComplex.graded(self.h_dims, self.complex.p)

    def section_map(self) -> ChainMap:
        """The weak equivalence HX -> X picking cycle representatives."""
        comps = [z.mul(s) for z, s in zip(self.cycles, self.sect)]
        return ChainMap(self.h_complex(), self.complex, comps)

    def class_of(self, n: int, vectors: FieldMatrix) -> FieldMatrix:
        """Homology classes of cycle columns given in ambient coordinates."""
        z = self.cycles[n] if n < len(self.cycles) else \
            FieldMatrix.identity(self.complex.dim(n), self.complex.p)
        in_z = solve(z, vectors)
        if in_z is None:
            raise ChainError(f"vectors are not cycles in degree {n}")
        pr = self.proj[n] if n < len(self.proj) else \
            FieldMatrix.zeros(0, in_z.rows, self.complex.p)
        return pr.mul(in_z)


def homology(x: ChainComplex) -> HomologyData:
    return HomologyData(x)


def homology_map(g: ChainMap, hx: HomologyData = None, hy: HomologyData = None):
    """Per-degree matrices of H(g) in the chosen homology coordinates."""
    hx = hx or homology(g.source)
    hy = hy or homology(g.target)
    top = max(g.source.top, g.target.top)
    out = []
    for n in range(top):
        hxn = hx.h_dims[n] if n < len(hx.h_dims) else 0
        hyn = hy.h_dims[n] if n < len(hy.h_dims) else 0
        if hxn == 0 or n >= g.source.top:
            out.append(FieldMatrix.zeros(hyn, hxn, g.p))
            continue
        reps = hx.cycles[n].mul(hx.sect[n])
        out.append(hy.class_of(n, g.component(n).mul(reps)))
    return out


def is_weak_equivalence_chain(g: ChainMap, hx=None, hy=None) -> bool:
    hx = hx or homology(g.source)
    hy = hy or homology(g.target)
    top = max(g.source.top, g.target.top)
    for n in range(top):
        hxn = hx.h_dims[n] if n < len(hx.h_dims) else 0
        hyn = hy.h_dims[n] if n < len(hy.h_dims) else 0
        if hxn != hyn:
            return False
    for m in homology_map(g, hx, hy):
        if rank(m) != m.rows:
            return False
    return True


def is_fibration_chain(g: ChainMap) -> bool:
    return g.is_epi_positive_degrees()


def is_cofibration_chain(g: ChainMap) -> bool:
    return g.is_mono()


# -- suspension ---------------------------------------------------------------


def suspend(x: ChainComplex) -> ChainComplex:
    if x.is_zero():
        return x
    dims = (0,) + x.dims
    diffs = [FieldMatrix.zeros(0, x.dim(0), x.p)]
    diffs += [x.diff(n).neg() for n in range(len(x.dims) - 1)]
    return ChainComplex(dims, diffs, x.p, check=False)


def suspend_map(g: ChainMap) -> ChainMap:
    sx, sy = suspend(g.source), suspend(g.target)
    comps = [FieldMatrix.zeros(0, 0, g.p)]
    comps += [g.component(n) for n in range(max(sx.top, sy.top) - 1)]
    return ChainMap(sx, sy, comps, check=False)


def iterated_suspend(x: ChainComplex, k: int) -> ChainComplex:
    for _ in range(k):
        x = suspend(x)
    return x


def iterated_suspend_map(g: ChainMap, k: int) -> ChainMap:
    for _ in range(k):
        g = suspend_map(g)
    return g


def _degree_one_cycles(x: ChainComplex) -> FieldMatrix:
    if x.top < 2:
        return FieldMatrix.identity(x.dim(1), x.p)
    return kernel_basis(x.diff(0))


def desuspend(x: ChainComplex) -> ChainComplex:
    z1 = _degree_one_cycles(x)
    dims = (z1.cols,) + tuple(x.dim(n) for n in range(2, x.top))
    d0 = solve(z1, x.diff(1).neg())
    if d0 is None:
        raise ChainError("differential image escapes the degree-1 cycles")
    diffs = [d0] + [x.diff(n + 1).neg() for n in range(1, len(dims) - 1)]
    return ChainComplex(dims, diffs, x.p, check=False)


def desuspend_map(g: ChainMap) -> ChainMap:
    zx = _degree_one_cycles(g.source)
    zy = _degree_one_cycles(g.target)
    c0 = solve(zy, g.component(1).mul(zx))
    if c0 is None:
        raise ChainError("map does not preserve degree-1 cycles")
    sx, sy = desuspend(g.source), desuspend(g.target)
    comps = [c0] + [g.component(n + 1) for n in range(1, max(sx.top, sy.top))]
    return ChainMap(sx, sy, comps, check=False)


# -- cofiber sequences --------------------------------------------------------


class CofiberData:
    """The cofiber Cf with its inclusion of Y and projection onto SX."""

    __slots__ = ("cofiber", "inclusion", "projection")

    def __init__(self, cofiber: ChainComplex, inclusion: ChainMap, projection: ChainMap):
        self.cofiber = cofiber
        self.inclusion = inclusion
        self.projection = projection


def cofiber(f: ChainMap) -> CofiberData:
    x, y, p = f.source, f.target, f.p
    top = max(y.top, x.top + 1)
    dims = [y.dim(n) + x.dim(n - 1) for n in range(top)]
    diffs = []
    for n in range(top - 1):
        diffs.append(FieldMatrix.block(
            [[y.diff(n), f.component(n)],
             [FieldMatrix.zeros(x.dim(n - 1), y.dim(n + 1), p), x.diff(n - 1).neg()]],
            p))
    cf = ChainComplex(dims, diffs, p, check=False)
    inc, prj = [], []
    for n in range(top):
        iy = FieldMatrix.identity(y.dim(n), p)
        ix = FieldMatrix.identity(x.dim(n - 1), p)
        inc.append(iy.vstack(FieldMatrix.zeros(x.dim(n - 1), y.dim(n), p)))
        prj.append(FieldMatrix.zeros(x.dim(n - 1), y.dim(n), p).hstack(ix))
    i = ChainMap(y, cf, inc, check=False)
    pr = ChainMap(cf, suspend(x), prj, check=False)
    return CofiberData(cf, i, pr)


def cone(x: ChainComplex) -> CofiberData:
    return cofiber(ChainMap.identity(x))


def path(x: ChainComplex):
    """The path complex PX with its fibration onto X."""
    p = x.p
    top = x.top
    dims = [x.dim(1)] + [x.dim(n + 1) + x.dim(n) for n in range(1, top)]
    diffs = []
    if top > 1:
        diffs.append(x.diff(1).neg().hstack(FieldMatrix.identity(x.dim(1), p)))
    for n in range(1, top - 1):
        diffs.append(FieldMatrix.block(
            [[x.diff(n + 1).neg(), FieldMatrix.identity(x.dim(n + 1), p)],
             [FieldMatrix.zeros(x.dim(n), x.dim(n + 2), p), x.diff(n)]],
            p))
    px = ChainComplex(dims, diffs, p, check=False)
    comps = [x.diff(0)]
    for n in range(1, px.top):
        comps.append(FieldMatrix.zeros(x.dim(n), x.dim(n + 1), p)
                     .hstack(FieldMatrix.identity(x.dim(n), p)))
    return px, ChainMap(px, x, comps, check=False)


class HomotopySquare:
    """A square commuting up to the homotopy h: beta f - g alpha = dh + hd."""

    __slots__ = ("f", "g", "alpha", "beta", "h")

    def __init__(self, f: ChainMap, g: ChainMap, alpha: ChainMap, beta: ChainMap, h=None):
        if alpha.source != f.source or alpha.target != g.source:
            raise ChainError("alpha endpoints do not match the square")
        if beta.source != f.target or beta.target != g.target:
            raise ChainError("beta endpoints do not match the square")
        self.f, self.g, self.alpha, self.beta = f, g, alpha, beta
        x, z, p = f.source, g.target, f.p
        top = max(x.top, z.top)
        hs = list(h or [])[:top]
        while len(hs) < top:
            n = len(hs)
            hs.append(FieldMatrix.zeros(z.dim(n + 1), x.dim(n), p))
        self.h = tuple(hs)
        for n in range(top):
            lhs = beta.component(n).mul(f.component(n)) \
                .sub(g.component(n).mul(alpha.component(n)))
            hn = self.h[n] if n < len(self.h) else FieldMatrix.zeros(z.dim(n + 1), x.dim(n), p)
            rhs = z.diff(n).mul(hn)
            if n >= 1:
                rhs = rhs.add(self.h[n - 1].mul(x.diff(n - 1)))
            if lhs != rhs:
                raise ChainError(f"homotopy identity fails at degree {n}")


def cofiber_map(square: HomotopySquare) -> ChainMap:
    """The induced map Cf -> Cg of a homotopy-commutative square."""
    cf = cofiber(square.f)
    cg = cofiber(square.g)
    p = square.f.p
    x, w = square.f.source, square.g.source
    comps = []
    for n in range(max(cf.cofiber.top, cg.cofiber.top)):
        h_prev = square.h[n - 1] if 1 <= n <= len(square.h) else \
            FieldMatrix.zeros(square.g.target.dim(n), x.dim(n - 1), p)
        comps.append(FieldMatrix.block(
            [[square.beta.component(n), h_prev],
             [FieldMatrix.zeros(w.dim(n - 1), square.f.target.dim(n), p),
              square.alpha.component(n - 1)]],
            p))
    return ChainMap(cf.cofiber, cg.cofiber, comps)


# -- quotients, kernels, comparison ------------------------------------------


def quotient_by_image(f: ChainMap):
    """The quotient Y/f(X) with its projection, in complement coordinates."""
    y, p = f.target, f.p
    projs, sects = [], []
    for n in range(y.top):
        im = image_basis(f.component(n))
        _, proj, sect = split_basis(im, y.dim(n))
        projs.append(proj)
        sects.append(sect)
    dims = [pr.rows for pr in projs]
    diffs = [projs[n].mul(y.diff(n)).mul(sects[n + 1]) for n in range(len(dims) - 1)]
    q = ChainComplex(dims, diffs, p, check=False)
    return q, ChainMap(y, q, projs, check=False)


def comparison_morphism(f: ChainMap, require_mono: bool = False) -> ChainMap:
    """The map Cf -> Y/f(X) with components [q 0].

    A weak equivalence whenever f is degreewise mono.
    """
    if require_mono and not f.is_mono():
        raise ChainError("comparison morphism requested for a non-mono map")
    cf = cofiber(f)
    q, qmap = quotient_by_image(f)
    comps = []
    for n in range(cf.cofiber.top):
        comps.append(qmap.component(n).hstack(
            FieldMatrix.zeros(q.dim(n), f.source.dim(n - 1), f.p)))
    return ChainMap(cf.cofiber, q, comps)


def kernel_complex(g: ChainMap):
    """The degreewise kernel subcomplex with its inclusion."""
    x, p = g.source, g.p
    bases = [kernel_basis(g.component(n)) for n in range(x.top)]
    dims = [b.cols for b in bases]
    diffs = []
    for n in range(len(dims) - 1):
        d = solve(bases[n], x.diff(n).mul(bases[n + 1]))
        if d is None:
            raise ChainError("kernel is not closed under the differential")
        diffs.append(d)
    w = ChainComplex(dims, diffs, p, check=False)
    return w, ChainMap(w, x, bases[:w.top], check=False)


def pushout_complex(f: ChainMap, g: ChainMap):
    """Degreewise pushout of A <-f- V -g-> B with its two legs.

    Returns ``(q, from_a, from_b)`` where ``from_a @ f == from_b @ g``.
    Any commuting pair factors through q via :func:`pushout_factor`.
    """
    if f.source != g.source:
        raise ChainError("pushout legs have different sources")
    a_cx, b_cx, p = f.target, g.target, f.p
    top = max(a_cx.top, b_cx.top)
    projs, sects = [], []
    for n in range(top):
        rel = image_basis(f.component(n).vstack(g.component(n).neg()))
        _, proj, sect = split_basis(rel, a_cx.dim(n) + b_cx.dim(n))
        projs.append(proj)
        sects.append(sect)
    dims = [pr.rows for pr in projs]
    diffs = []
    for n in range(len(dims) - 1):
        big = FieldMatrix.block_diag([a_cx.diff(n), b_cx.diff(n)], p)
        diffs.append(projs[n].mul(big).mul(sects[n + 1]))
    q = ChainComplex(dims, diffs, p, check=False)
    from_a = ChainMap(a_cx, q, [projs[n].take_columns(range(a_cx.dim(n)))
                                for n in range(top)], check=False)
    from_b = ChainMap(b_cx, q, [projs[n].take_columns(range(a_cx.dim(n),
                                                            a_cx.dim(n) + b_cx.dim(n)))
                                for n in range(top)], check=False)
    return q, from_a, from_b


def pushout_factor(from_a: ChainMap, from_b: ChainMap,
                   h_a: ChainMap, h_b: ChainMap) -> ChainMap:
    """The unique map out of a chain-level pushout matching h_a and h_b."""
    q = from_a.target
    tgt = h_a.target
    comps = []
    for n in range(max(q.top, tgt.top)):
        big = from_a.component(n).hstack(from_b.component(n)).transpose()
        rhs = h_a.component(n).hstack(h_b.component(n)).transpose()
        x = solve(big, rhs)
        if x is None:
            raise ChainError("pair does not factor through the pushout")
        comps.append(x.transpose())
    return ChainMap(q, tgt, comps)


# -- standard decomposition and minimal factorisation -------------------------


def standard_decomposition(x: ChainComplex):
    """Split x as (cone on the boundaries) (+) (homology).

    Returns ``(phi, s, iso)`` where ``phi`` maps the cone on BX into x,
    ``s: HX -> x`` is a weak equivalence, and ``iso = [phi | s]`` is an
    isomorphism from their direct sum onto x.
    """
    hd = homology(x)
    p = x.p
    bx = ChainComplex.graded([b.cols for b in hd.boundaries], p)
    cbx = cone(bx).cofiber
    phi_comps = []
    for n in range(cbx.top):
        bn = hd.boundaries[n] if n < len(hd.boundaries) else \
            FieldMatrix.zeros(x.dim(n), 0, p)
        if n >= 1 and n - 1 < len(hd.boundaries) and hd.boundaries[n - 1].cols:
            rho = solve(x.diff(n - 1), hd.boundaries[n - 1])
            if rho is None:
                raise ChainError("boundary basis has no differential preimage")
        else:
            rho = FieldMatrix.zeros(x.dim(n), bx.dim(n - 1), p)
        phi_comps.append(bn.hstack(rho))
    phi = ChainMap(cbx, x, phi_comps)
    s = hd.section_map()
    iso = phi.glue_from_sum(s)
    return phi, s, iso


def minimal_representative_chain(x: ChainComplex):
    """The homology of x with zero differentials and its weak equivalence into x."""
    _, s, _ = standard_decomposition(x)
    return s.source, s


def minimal_factorisation_chain(g: ChainMap):
    """The minimal factorisation g = beta alpha through (CBW (+) CHW) (+) Y.

    ``alpha`` is a degreewise mono whose cokernel over the kernel of g has
    zero differentials; ``beta`` is the projection, a fibration and weak
    equivalence.
    """
    x, y, p = g.source, g.target, g.p
    w, j = kernel_complex(g)
    hd = homology(w)
    b_dims = [b.cols for b in hd.boundaries]
    h_dims = list(hd.h_dims)
    bw = ChainComplex.graded(b_dims, p)
    hw = ChainComplex.graded(h_dims, p)
    cbw = cone(bw).cofiber
    chw = cone(hw).cofiber
    mid_acyclic = cbw.direct_sum(chw)

    _, _, iso = standard_decomposition(w)
    inv_iso = [inverse(iso.component(n)) for n in range(w.top)]
    # top slots of the map W -> CBW (+) CHW induced by the decomposition
    a_slots, c_slots = [], []
    retr = []
    for n in range(w.top):
        coords = inv_iso[n]
        bn = b_dims[n] if n < len(b_dims) else 0
        hn = h_dims[n] if n < len(h_dims) else 0
        cb_n = bn + (b_dims[n - 1] if 1 <= n <= len(b_dims) else 0)
        a_slots.append(coords.take_rows(range(bn)))
        c_slots.append(coords.take_rows(range(cb_n, cb_n + hn)))
        retr.append(split_basis(j.component(n), x.dim(n))[0])
    # extend the slots over X by zero on the chosen complement of W
    phi_comps = []
    for n in range(max(mid_acyclic.top, x.top)):
        if n < w.top:
            a_bar = a_slots[n].mul(retr[n])
            c_bar = c_slots[n].mul(retr[n])
        else:
            a_bar = FieldMatrix.zeros(bw.dim(n), x.dim(n), p)
            c_bar = FieldMatrix.zeros(hw.dim(n), x.dim(n), p)
        if n >= 1 and n - 1 < w.top:
            a_prev = a_slots[n - 1].mul(retr[n - 1]).mul(x.diff(n - 1))
            c_prev = c_slots[n - 1].mul(retr[n - 1]).mul(x.diff(n - 1))
        else:
            a_prev = FieldMatrix.zeros(bw.dim(n - 1), x.dim(n), p)
            c_prev = FieldMatrix.zeros(hw.dim(n - 1), x.dim(n), p)
        phi_comps.append(a_bar.vstack(a_prev).vstack(c_bar).vstack(c_prev))
    phi = ChainMap(x, mid_acyclic, phi_comps)
    alpha = phi.stack_into_sum(g)
    mid = alpha.target
    beta_comps = [FieldMatrix.zeros(y.dim(n), mid_acyclic.dim(n), p)
                  .hstack(FieldMatrix.identity(y.dim(n), p))
                  for n in range(mid.top)]
    beta = ChainMap(mid, y, beta_comps, check=False)
    return alpha, beta


def natural_factorisation_cone(g: ChainMap):
    """g as (cofibration into CX (+) Y) followed by the projection."""
    x, y = g.source, g.target
    cx = cone(x)
    alpha = cx.inclusion.stack_into_sum(g)
    mid = alpha.target
    p = g.p
    beta_comps = [FieldMatrix.zeros(y.dim(n), cx.cofiber.dim(n), p)
                  .hstack(FieldMatrix.identity(y.dim(n), p)) for n in range(mid.top)]
    return alpha, ChainMap(mid, y, beta_comps, check=False)


def natural_factorisation_path(g: ChainMap):
    """g as the summand inclusion into X (+) PY followed by [g p]."""
    x, y = g.source, g.target
    py, pmap = path(y)
    _, inc_x, _, _, _ = sum_injections(x, py)
    beta = g.glue_from_sum(pmap)
    return inc_x, beta


# -- lifting against acyclic fibrations ---------------------------------------


class _ConeCarrier:
    """A complex presented as a cone on a graded space, for extensions.

    Wraps the standard decomposition of an acyclic complex N: chain maps
    into N correspond to arbitrary degreewise maps into the boundary space,
    which extend along any degreewise mono.
    """

    def __init__(self, n: ChainComplex):
        hd = homology(n)
        if any(hd.h_dims):
            raise ChainError("cone presentation requires an acyclic complex")
        _, _, iso = standard_decomposition(n)
        self.complex = n
        self.b_dims = [b.cols for b in hd.boundaries]
        self.iso = iso
        self.inv = [inverse(iso.component(k)) for k in range(n.top)]

    def slots(self, m: ChainMap):
        """Top-slot maps A_n -> B_n determining the chain map m: A -> N."""
        out = []
        for n in range(self.complex.top):
            bn = self.b_dims[n] if n < len(self.b_dims) else 0
            out.append(self.inv[n].mul(m.component(n)).take_rows(range(bn)))
        return out

    def assemble(self, source: ChainComplex, slots) -> ChainMap:
        """The chain map source -> N with the given top slots."""
        p = self.complex.p
        comps = []
        for n in range(self.complex.top):
            bn = self.b_dims[n] if n < len(self.b_dims) else 0
            top_part = slots[n] if n < len(slots) else \
                FieldMatrix.zeros(bn, source.dim(n), p)
            bprev = self.b_dims[n - 1] if 1 <= n <= len(self.b_dims) else 0
            if n >= 1 and n - 1 < len(slots):
                low_part = slots[n - 1].mul(source.diff(n - 1))
            else:
                low_part = FieldMatrix.zeros(bprev, source.dim(n), p)
            comps.append(self.iso.component(n).mul(top_part.vstack(low_part)))
        return ChainMap(source, self.complex, comps)


def lift_through_acyclic_fibration(alpha: ChainMap, beta: ChainMap,
                                   u: ChainMap, v: ChainMap) -> ChainMap:
    """Fill the square u/alpha/beta/v with a map lam: B -> E.

    ``alpha: A -> B`` must be degreewise mono, ``beta: E -> D`` a fibration
    and weak equivalence, and ``beta u == v alpha``.  Then ``lam alpha == u``
    and ``beta lam == v``.
    """
    a_cx, b_cx = alpha.source, alpha.target
    e_cx, d_cx = beta.source, beta.target
    if u.source != a_cx or u.target != e_cx or v.source != b_cx or v.target != d_cx:
        raise ChainError("lifting square endpoints do not match")
    n_cx, iota = kernel_complex(beta)
    carrier = _ConeCarrier(n_cx)

    # retraction E -> N extending the identity of N
    id_slots = carrier.slots(ChainMap.identity(n_cx))
    r_slots = []
    for n in range(n_cx.top):
        r_iota = split_basis(iota.component(n), e_cx.dim(n))[0]
        r_slots.append(id_slots[n].mul(r_iota))
    r_n = carrier.assemble(e_cx, r_slots)

    # chain section of beta through the complement of N
    sigma_comps = []
    for n in range(max(e_cx.top, d_cx.top)):
        kb = kernel_basis(r_n.component(n)) if n < e_cx.top else \
            FieldMatrix.zeros(0, 0, beta.p)
        bk = beta.component(n).mul(kb)
        if bk.rows != bk.cols or rank(bk) != bk.rows:
            raise ChainError("map is not an acyclic fibration")
        sigma_comps.append(kb.mul(inverse(bk)))
    sigma = ChainMap(d_cx, e_cx, sigma_comps)

    w = u.sub(sigma.compose(v).compose(alpha))
    w_slots_in_n = []
    for n in range(n_cx.top):
        in_n = solve(iota.component(n), w.component(n))
        if in_n is None:
            raise ChainError("correction term escapes the kernel")
        w_slots_in_n.append(in_n)
    w_in_n = ChainMap(a_cx, n_cx, w_slots_in_n, check=False)
    slots = carrier.slots(w_in_n)
    ext_slots = []
    for n in range(n_cx.top):
        r_alpha = split_basis(alpha.component(n), b_cx.dim(n))[0]
        ext_slots.append(slots[n].mul(r_alpha))
    w_bar = carrier.assemble(b_cx, ext_slots)

    lam = sigma.compose(v).add(iota.compose(w_bar))
    if lam.compose(alpha) != u or beta.compose(lam) != v:
        raise ChainError("lift construction failed; check the square's classes")
    return lam
