"""Dynamics of endomorphisms of finite groups.

An endomorphism of a finite group, iterated, gives a functional graph on the
group's elements.  This package builds those graphs, checks their structure
(nil/periodic splitting, procreation numbers, cycle types), canonizes them up
to isomorphism, and counts the isomorphism types of stretch maps on Z/nZ.
"""

from .dynamics import Fdg, fitting_check, kernel_chain, image_chain, nil_part, per_part
from .groups import AbelianGroup, TableGroup, MatrixEndomorphism, TableEndomorphism, make_cyclic, stretch
from .state_graph import StateSpace, build_state_space, canonical_invariant, rigid_procreation_check

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "Fdg",
    "MatrixEndomorphism",
    "StateSpace",
    "TableEndomorphism",
    "TableGroup",
    "build_state_space",
    "canonical_invariant",
    "fitting_check",
    "image_chain",
    "kernel_chain",
    "make_cyclic",
    "nil_part",
    "per_part",
    "rigid_procreation_check",
    "stretch",
]
