"""Exact lattices over the group ring Z_(p) C_p of a cyclic group of prime order."""

from .arith import PLocal, Q
from .groupring import Cyclo, GroupAlgebraElt, GroupRingElt, MaxOrderElt
from .hermitian import FormedLattice, JordanSplit, jordan_split
from .modulestruct import CompatibleBasisResult, DecompositionType, SigmaLattice, compatible_basis, decomposition_type
from .plattice import ZpLattice

__version__ = "0.1.0"

__all__ = [
    "PLocal",
    "Q",
    "Cyclo",
    "GroupAlgebraElt",
    "GroupRingElt",
    "MaxOrderElt",
    "ZpLattice",
    "SigmaLattice",
    "DecompositionType",
    "CompatibleBasisResult",
    "compatible_basis",
    "decomposition_type",
    "FormedLattice",
    "JordanSplit",
    "jordan_split",
]
