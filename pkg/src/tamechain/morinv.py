"""Betti diagrams of morphisms and commutative-ladder invariants.

Three constructions attach diagrams to a tame map g: the quotient of the
cofibration in its minimal factorisation, the cover of its parameterwise
cofiber, and the cofiber of a lift of g between the covers of its endpoints
(plus the diagonal-free view of the second).  All agree off the diagonal.

A commutative ladder (values concentrated in degrees 0 and 1) is the
cofiber of its own differential, viewed as a map of parametrised vector
spaces, so the same constructions apply to it.
"""

from __future__ import annotations

from tamechain.chaincx import ChainComplex, ChainMap
from tamechain.decomp import (
    decompose_cofibrant,
    diagrams_without_diagonal,
)
from tamechain.exactlin import FieldMatrix
from tamechain.tamecat import (
    MinimalCover,
    TameComplex,
    TameMap,
    minimal_cover,
    minimal_factorisation_tame,
    quotient,
    tame_cofiber,
    tame_cofiber_map,
    tame_lift,
    zero_complex_tame,
)


class MorinvError(ValueError):
    """Raised for invalid ladders or violated structural constraints."""


class MorphismBetti:
    """Diagrams attached to a morphism by one of the constructions."""

    __slots__ = ("method", "diagrams")

    def __init__(self, method: str, diagrams):
        self.method = method
        self.diagrams = list(diagrams)

    def __repr__(self):
        return f"MorphismBetti({self.method}, {self.diagrams})"


def morphism_betti_minfact(g: TameMap) -> MorphismBetti:
    """Diagrams of the quotient middle/alpha(source) of the minimal factorisation."""
    alpha, _, _ = minimal_factorisation_tame(g)
    return MorphismBetti("minfact", decompose_cofibrant(quotient(alpha)))


def morphism_betti_cover_cofiber(g: TameMap) -> MorphismBetti:
    """Diagrams of the minimal cover of the parameterwise cofiber."""
    cg, _, _ = tame_cofiber(g)
    return MorphismBetti("cover_cofiber",
                         decompose_cofibrant(minimal_cover(cg).cover))


def morphism_betti_min(g: TameMap) -> MorphismBetti:
    """The cover-of-cofiber diagrams with the diagonal dropped."""
    base = morphism_betti_cover_cofiber(g)
    return MorphismBetti("min", diagrams_without_diagonal(base.diagrams))


def cover_lift(g: TameMap):
    """A lift of g between the minimal covers of its endpoints."""
    cov_x = minimal_cover(g.source)
    cov_y = minimal_cover(g.target)
    z = zero_complex_tame(g.grid, g.p)
    g_prime = tame_lift(TameMap.zero(z, cov_x.cover), cov_y.map,
                        TameMap.zero(z, cov_y.cover), g.compose(cov_x.map))
    return cov_x, cov_y, g_prime


def morphism_betti_cofiber_covers(g: TameMap) -> MorphismBetti:
    """Diagrams of the cofiber of a lift between the endpoint covers."""
    _, _, g_prime = cover_lift(g)
    cg_prime, _, _ = tame_cofiber(g_prime)
    return MorphismBetti("cofiber_covers", decompose_cofibrant(cg_prime))


def cover_cofiber_comparison(g: TameMap):
    """The induced map C g' -> C g as a cover candidate.

    When the source of g is cofibrant this is a minimal cover of the
    cofiber of g.
    """
    cov_x, cov_y, g_prime = cover_lift(g)
    comparison = tame_cofiber_map(g_prime, g, cov_x.map, cov_y.map)
    return MinimalCover(comparison.source, comparison)


def all_methods(g: TameMap) -> dict:
    """All four morphism-diagram constructions keyed by method name."""
    out = {}
    for mb in (morphism_betti_minfact(g), morphism_betti_cover_cofiber(g),
               morphism_betti_cofiber_covers(g), morphism_betti_min(g)):
        out[mb.method] = mb
    return out


# -- commutative ladders -----------------------------------------------------


def is_commutative_ladder(z: TameComplex) -> bool:
    """Values concentrated in chain degrees 0 and 1."""
    return all(v.top <= 2 for v in z.values)


def degree_part(z: TameComplex, n: int) -> TameComplex:
    """The degree-n spaces of z as a parametrised vector space."""
    p = z.p
    values = [ChainComplex.graded([v.dim(n)], p) for v in z.values]
    transitions = []
    for a in range(1, len(z.grid)):
        comp = z.transitions[a - 1].component(n)
        transitions.append(ChainMap(values[a - 1], values[a], [comp], check=False))
    return TameComplex(z.grid, values, transitions, check=False)


def ladder_differential(z: TameComplex) -> TameMap:
    """The differential of a ladder as a map of parametrised vector spaces."""
    if not is_commutative_ladder(z):
        raise MorinvError("ladders must have no chains above degree 1")
    z1 = degree_part(z, 1)
    z0 = degree_part(z, 0)
    comps = []
    for a in range(len(z.grid)):
        d = z.values[a].diff(0)
        comps.append(ChainMap(z1.values[a], z0.values[a], [d], check=False))
    return TameMap(z1, z0, comps)


def check_ladder_constraints(diagrams, diagonal_too: bool = True) -> bool:
    """No diagonal above degree 0 and nothing above degree 1.

    With ``diagonal_too`` false only the off-diagonal part is constrained,
    which is the portion that holds for every construction.
    """
    for n, d in enumerate(diagrams):
        part = d if diagonal_too else d.without_diagonal()
        if n >= 1 and not part.diagonal_part().is_empty():
            return False
        if n > 1 and not part.is_empty():
            return False
    return True


def ladder_betti(z: TameComplex) -> dict:
    """All morphism diagrams of the differential of a commutative ladder.

    The structural constraints (no diagonal above degree 0, nothing above
    degree 1) are enforced for the minimal-factorisation and cover-of-cofiber
    diagrams, whose values are decompositions of objects the degree-bound
    morphism argument applies to.  The cofiber-of-covers diagrams can carry
    a degree-1 diagonal point when the degree-1 part of the ladder is not
    cofibrant, so only their off-diagonal part is checked.
    """
    delta = ladder_differential(z)
    out = all_methods(delta)
    for mb in out.values():
        full = mb.method in ("minfact", "cover_cofiber", "min")
        if not check_ladder_constraints(mb.diagrams, diagonal_too=full):
            raise MorinvError(
                f"ladder constraints violated by the {mb.method} diagrams")
    return out
