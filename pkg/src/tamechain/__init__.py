"""Exact invariants of tame parametrised chain complexes over a prime field.

The package computes minimal covers, interval-sphere decompositions and
Betti diagrams for one-parameter families of compact chain complexes,
covering persistence modules, commutative ladders and zigzags in one
engine.  All arithmetic is exact over F_p with deterministic elimination,
so results are reproducible bit for bit.
"""

from tamechain.chaincx import ChainComplex, ChainMap
from tamechain.decomp import (
    BettiDiagram,
    IntervalSphere,
    betti,
    decompose_cofibrant,
    min_betti,
    minimal_representative_tame,
    realize,
    rebuild_from_betti,
)
from tamechain.exactlin import FieldElement, FieldMatrix
from tamechain.params import INFINITY, Param, param
from tamechain.tamecat import (
    TameComplex,
    TameMap,
    is_cofibrant,
    is_cofibration,
    is_fibration,
    is_weak_equivalence,
    kan_extension,
    minimal_cover,
    minimal_factorisation_tame,
)
from tamechain.zigzag import DiscreteZigzag, Profile, straighten, zigzag_betti

__all__ = [
    "BettiDiagram",
    "ChainComplex",
    "ChainMap",
    "DiscreteZigzag",
    "FieldElement",
    "FieldMatrix",
    "INFINITY",
    "IntervalSphere",
    "Param",
    "Profile",
    "TameComplex",
    "TameMap",
    "betti",
    "decompose_cofibrant",
    "is_cofibrant",
    "is_cofibration",
    "is_fibration",
    "is_weak_equivalence",
    "kan_extension",
    "min_betti",
    "minimal_cover",
    "minimal_factorisation_tame",
    "minimal_representative_tame",
    "param",
    "realize",
    "rebuild_from_betti",
    "straighten",
    "zigzag_betti",
]

__version__ = "0.1.0"
