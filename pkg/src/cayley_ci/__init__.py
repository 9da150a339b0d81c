"""Permutation groups, Cayley digraphs and Schur rings for checking Cayley-isomorphism claims."""

from .digraph import ColoredDigraph, Digraph, automorphism_group, cayley, haar, isomorphism, two_closure
from .groups import FiniteGroup, cyclic, dihedral, elementary_abelian, small_groups
from .perm import Perm, PermGroup, StabilizerChain

__all__ = [
    "ColoredDigraph", "Digraph", "FiniteGroup", "Perm", "PermGroup", "StabilizerChain",
    "automorphism_group", "cayley", "cyclic", "dihedral", "elementary_abelian", "haar",
    "isomorphism", "small_groups", "two_closure",
]
