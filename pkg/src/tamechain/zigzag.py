"""Discrete zigzags, straightening, and incarnation as tame complexes.

A zigzag is a diagram over 0..k whose arrows point left or right per a
direction profile.  Straightening converts it into a one-directional
diagram on 0..k by suspending and taking cofibers of the backward maps;
weights count the left steps consumed so far.  Natural transformations of
straightened zigzags correspond to componentwise maps plus a homotopy per
left step; ``unstraighten_map`` extracts that data and
``assemble_straight_map`` is the inverse.
"""

from __future__ import annotations

from tamechain.chaincx import (
    ChainComplex,
    ChainMap,
    HomotopySquare,
    cofiber,
    cofiber_map,
    iterated_suspend,
    iterated_suspend_map,
)
from tamechain.decomp import betti
from tamechain.exactlin import FieldMatrix
from tamechain.tamecat import TameComplex, kan_extension


class ZigzagError(ValueError):
    """Raised for malformed profiles, diagrams, or transformations."""


class Profile:
    """A direction word over {r, l}; length k >= 1."""

    __slots__ = ("directions",)

    def __init__(self, directions):
        dirs = tuple(directions)
        if not dirs:
            raise ZigzagError("profiles need at least one direction")
        for d in dirs:
            if d not in ("r", "l"):
                raise ZigzagError(f"direction must be 'r' or 'l', got {d!r}")
        self.directions = dirs

    @property
    def k(self) -> int:
        return len(self.directions)

    def weights(self) -> list:
        """w_a counts the left steps with index at most a; w_0 = 0."""
        out = [0]
        for d in self.directions:
            out.append(out[-1] + (1 if d == "l" else 0))
        return out

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return self.directions == other.directions

    def __hash__(self):
        return hash(self.directions)

    def __repr__(self):
        return f"Profile({''.join(self.directions)})"


class DiscreteZigzag:
    """Chain complexes X^0..X^k with one map per step, oriented by the profile."""

    __slots__ = ("profile", "spaces", "maps")

    def __init__(self, profile: Profile, spaces, maps):
        self.profile = profile
        self.spaces = tuple(spaces)
        self.maps = tuple(maps)
        k = profile.k
        if len(self.spaces) != k + 1 or len(self.maps) != k:
            raise ZigzagError("need k+1 spaces and k maps")
        for a in range(1, k + 1):
            m = self.maps[a - 1]
            if profile.directions[a - 1] == "r":
                src, tgt = self.spaces[a - 1], self.spaces[a]
            else:
                src, tgt = self.spaces[a], self.spaces[a - 1]
            if m.source != src or m.target != tgt:
                raise ZigzagError(f"map at step {a} does not match its direction")

    @property
    def p(self) -> int:
        return self.spaces[0].p

    @property
    def k(self) -> int:
        return self.profile.k


class ZigzagMap:
    """A natural transformation of zigzags over one profile."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: DiscreteZigzag, target: DiscreteZigzag, components):
        if source.profile != target.profile:
            raise ZigzagError("zigzag maps need a common profile")
        self.source = source
        self.target = target
        self.components = tuple(components)
        if len(self.components) != source.k + 1:
            raise ZigzagError("need one component per index")
        for a, c in enumerate(self.components):
            if c.source != source.spaces[a] or c.target != target.spaces[a]:
                raise ZigzagError(f"component {a} has wrong endpoints")
        for a in range(1, source.k + 1):
            if source.profile.directions[a - 1] == "r":
                lhs = self.components[a].compose(source.maps[a - 1])
                rhs = target.maps[a - 1].compose(self.components[a - 1])
            else:
                lhs = self.components[a - 1].compose(source.maps[a - 1])
                rhs = target.maps[a - 1].compose(self.components[a])
            if lhs != rhs:
                raise ZigzagError(f"naturality square at step {a} does not commute")

    def __eq__(self, other):
        if not isinstance(other, ZigzagMap):
            return NotImplemented
        return (self.source.spaces == other.source.spaces
                and self.target.spaces == other.target.spaces
                and self.components == other.components)


class StraightenedZigzag:
    """A one-directional diagram on 0..k produced by straightening."""

    __slots__ = ("zigzag", "spaces", "maps", "weights")

    def __init__(self, zigzag: DiscreteZigzag, spaces, maps, weights):
        self.zigzag = zigzag
        self.spaces = tuple(spaces)
        self.maps = tuple(maps)
        self.weights = tuple(weights)

    @property
    def k(self) -> int:
        return len(self.spaces) - 1


class StraightMap:
    """A natural transformation between straightenings over one profile."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: StraightenedZigzag, target: StraightenedZigzag,
                 components, check: bool = True):
        if source.zigzag.profile != target.zigzag.profile:
            raise ZigzagError("straightened maps need a common profile")
        self.source = source
        self.target = target
        self.components = tuple(components)
        if len(self.components) != source.k + 1:
            raise ZigzagError("need one component per index")
        if check:
            for a, c in enumerate(self.components):
                if c.source != source.spaces[a] or c.target != target.spaces[a]:
                    raise ZigzagError(f"component {a} has wrong endpoints")
            for a in range(1, source.k + 1):
                lhs = self.components[a].compose(source.maps[a - 1])
                rhs = target.maps[a - 1].compose(self.components[a - 1])
                if lhs != rhs:
                    raise ZigzagError(f"straightened square at {a} does not commute")


def _backward_cofibers(z: DiscreteZigzag):
    """Cofiber data of the backward map entering each left step."""
    out = {}
    for a in range(1, z.k + 1):
        if z.profile.directions[a - 1] == "l":
            out[a] = cofiber(z.maps[a - 1])
    return out


def straighten(z: DiscreteZigzag) -> StraightenedZigzag:
    """Convert a zigzag into a functor on the standard poset 0..k."""
    k = z.k
    w = z.profile.weights()
    cof = _backward_cofibers(z)
    spaces = []
    for a in range(k + 1):
        if a == k:
            spaces.append(iterated_suspend(z.spaces[k], w[k]))
        elif z.profile.directions[a] == "r":
            spaces.append(iterated_suspend(z.spaces[a], w[a]))
        else:
            spaces.append(iterated_suspend(cof[a + 1].cofiber, w[a]))
    maps = []
    for a in range(1, k + 1):
        ca = z.profile.directions[a - 1]
        ca_next = z.profile.directions[a] if a < k else None
        if ca == "r":
            step = iterated_suspend_map(z.maps[a - 1], w[a])
            if ca_next == "l":
                inc = iterated_suspend_map(cof[a + 1].inclusion, w[a])
                step = inc.compose(step)
        else:
            step = iterated_suspend_map(cof[a].projection, w[a - 1])
            if ca_next == "l":
                inc = iterated_suspend_map(cof[a + 1].inclusion, w[a])
                step = inc.compose(step)
        maps.append(step)
    return StraightenedZigzag(z, spaces, maps, w)


def straighten_map(f: ZigzagMap) -> StraightMap:
    """The straightening of a natural transformation of zigzags."""
    zx, zy = f.source, f.target
    sx, sy = straighten(zx), straighten(zy)
    k = zx.k
    w = zx.profile.weights()
    comps = []
    for a in range(k + 1):
        if a < k and zx.profile.directions[a] == "l":
            square = HomotopySquare(zx.maps[a], zy.maps[a],
                                    f.components[a + 1], f.components[a])
            comps.append(iterated_suspend_map(cofiber_map(square), w[a]))
        else:
            comps.append(iterated_suspend_map(f.components[a], w[a]))
    return StraightMap(sx, sy, comps)


def _unshift(m: ChainMap, w: int, src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    """Drop w suspensions from a map between w-fold suspensions."""
    comps = [m.component(n + w) for n in range(max(src.top, tgt.top))]
    return ChainMap(src, tgt, comps)


def unstraighten_map(g: StraightMap):
    """Extract the components-plus-homotopies data of a straightened map.

    Returns ``(zmap, homotopies)`` where ``homotopies[a]`` is the homotopy
    attached to the left step a; together they determine g uniquely.
    """
    sx, sy = g.source, g.target
    zx, zy = sx.zigzag, sy.zigzag
    k = zx.k
    w = zx.profile.weights()
    p = zx.p
    comps = [None] * (k + 1)
    homotopies = {}
    alphas = {}
    for a in range(k + 1):
        if a == k or zx.profile.directions[a] == "r":
            comps[a] = _unshift(g.components[a], w[a], zx.spaces[a], zy.spaces[a])
            continue
        # left step a+1: the component lives on the cofibers
        xa, xa1 = zx.spaces[a], zx.spaces[a + 1]
        ya, ya1 = zy.spaces[a], zy.spaces[a + 1]
        beta_comps, alpha_comps, h_comps = [], [], []
        top = max(xa.top, xa1.top + 1, ya.top, ya1.top + 1)
        for m in range(top):
            gm = g.components[a].component(m + w[a])
            beta_comps.append(gm.take_rows(range(ya.dim(m)))
                              .take_columns(range(xa.dim(m))))
            alpha_comps.append(
                gm.take_rows(range(ya.dim(m), ya.dim(m) + ya1.dim(m - 1)))
                .take_columns(range(xa.dim(m), xa.dim(m) + xa1.dim(m - 1))))
            h_comps.append(gm.take_rows(range(ya.dim(m)))
                           .take_columns(range(xa.dim(m), xa.dim(m) + xa1.dim(m - 1))))
            low_left = gm.take_rows(range(ya.dim(m), ya.dim(m) + ya1.dim(m - 1))) \
                .take_columns(range(xa.dim(m)))
            if not low_left.is_zero():
                raise ZigzagError(
                    f"component {a} is not triangular on the cofiber blocks")
        comps[a] = ChainMap(xa, ya, beta_comps)
        alphas[a + 1] = alpha_comps
        homotopies[a + 1] = [h_comps[m + 1] for m in range(top - 1)]
    # consistency and the homotopy identities
    for a, alpha_comps in alphas.items():
        for m, observed in enumerate(alpha_comps[1:]):
            if observed != comps[a].component(m):
                raise ZigzagError(f"cofiber block at step {a} disagrees with "
                                  "the extracted component at its source index")
    for a, h in homotopies.items():
        HomotopySquare(zx.maps[a - 1], zy.maps[a - 1], comps[a], comps[a - 1], h)
    zmap = ZigzagMap(zx, zy, comps)
    return zmap, homotopies


def assemble_straight_map(f: ZigzagMap, homotopies=None) -> StraightMap:
    """The straightened map with the given homotopies at left steps."""
    zx, zy = f.source, f.target
    sx, sy = straighten(zx), straighten(zy)
    k = zx.k
    w = zx.profile.weights()
    homotopies = homotopies or {}
    comps = []
    for a in range(k + 1):
        if a < k and zx.profile.directions[a] == "l":
            square = HomotopySquare(zx.maps[a], zy.maps[a], f.components[a + 1],
                                    f.components[a], homotopies.get(a + 1))
            comps.append(iterated_suspend_map(cofiber_map(square), w[a]))
        else:
            comps.append(iterated_suspend_map(f.components[a], w[a]))
    return StraightMap(sx, sy, comps)


def incarnate(z: DiscreteZigzag, grid) -> TameComplex:
    """Kan-extend the straightening along a grid of k+1 parameters."""
    grid = list(grid)
    if len(grid) != z.k + 1:
        raise ZigzagError(f"grid must have {z.k + 1} points, got {len(grid)}")
    s = straighten(z)
    return kan_extension(s.spaces, s.maps, grid)


def zigzag_betti(z: DiscreteZigzag, grid) -> list:
    """Betti diagrams of the incarnation over the given grid."""
    return betti(incarnate(z, grid))
