"""Birkhoff-James orthogonality and its local symmetry in classical sequence spaces.

Exactly representable sequences (finite prefix + structured tail) with exact
rational arithmetic; per-space orthogonality predicates, smoothness and
symmetry classifiers, support functionals, signed-permutation isometries, and
a definition-based convex-minimization oracle for cross-validation.
"""

__version__ = "0.1.0"

from .scalar import Scalar, Verdict, compare_mod  # noqa: F401
from .seqrep import SequenceRep, Space, LINF, C, C0, C00, L1, lp  # noqa: F401
from .orth import birkhoff_james  # noqa: F401
from .oracle import oracle_orth  # noqa: F401
