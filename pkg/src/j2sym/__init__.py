"""Construction and verification of the Hall-Janko group J2 from a
32-generator involutory symmetric presentation over the control group
2^5:A5."""

from .perm import Permutation
from .permgroup import CosetAction, PermutationGroup, StabilizerChain
from .presentation import (
    Presentation,
    ProgenitorSpec,
    build_progenitor_quotient_presentation,
    cayley_presentation,
    sufficient_subpresentation,
    verify_presentation,
)
from .toddcox import (
    CosetTable,
    EnumerationStats,
    LimitExceeded,
    coset_permutations,
    enumerate_cosets,
    standardize,
)
from .words import Word, WordError, expand_progenitor_relator, transversal_word

__version__ = "0.1.0"

__all__ = [
    "CosetAction",
    "CosetTable",
    "EnumerationStats",
    "LimitExceeded",
    "Permutation",
    "PermutationGroup",
    "Presentation",
    "ProgenitorSpec",
    "StabilizerChain",
    "Word",
    "WordError",
    "build_progenitor_quotient_presentation",
    "cayley_presentation",
    "coset_permutations",
    "enumerate_cosets",
    "expand_progenitor_relator",
    "standardize",
    "sufficient_subpresentation",
    "transversal_word",
    "verify_presentation",
]
