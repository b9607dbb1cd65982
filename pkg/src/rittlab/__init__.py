"""rittlab: a desk-scale numerical laboratory for Ritt operators.

Finite-dimensional l^p contexts stand in for the abstract spaces of the
theory, so every quantity (resolvent constants, contour calculus,
square-function norms, R-bound estimates, basis pairing sums) becomes a
computable number with an honest error or tail bound attached.
"""

from . import (
    basis,
    diagnostics,
    errors,
    experiments,
    funcalc,
    holo,
    identities,
    numkernel,
    squarefn,
    stolz,
    tails,
    zoo,
)
from .numkernel import Operator, Spectrum
from .stolz import Contour, StolzDomain

__version__ = "0.1.0"

__all__ = [
    "Operator",
    "Spectrum",
    "StolzDomain",
    "Contour",
    "basis",
    "diagnostics",
    "errors",
    "experiments",
    "funcalc",
    "holo",
    "identities",
    "numkernel",
    "squarefn",
    "stolz",
    "tails",
    "zoo",
]
