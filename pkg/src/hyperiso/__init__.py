"""Weighted isoperimetric profiles on the hyperbolic disc.

The library models the Poincare disc carrying a radial weight whose
logarithm has a non-decreasing piecewise linear slope profile.  It computes
weighted volumes and perimeters, the isoperimetric profile realised by
centred balls, boundary-value solutions for the associated curvature
equation, and the comparison inequalities that make centred balls minimal.
"""

from ._kernels import BACKEND
from .errors import (
    BracketError,
    DomainError,
    HyperisoError,
    HypothesisViolated,
    MonotonicityError,
    NonConvergence,
    RangeError,
    SingularInterior,
    VolumeMismatch,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BracketError",
    "DomainError",
    "HyperisoError",
    "HypothesisViolated",
    "MonotonicityError",
    "NonConvergence",
    "RangeError",
    "SingularInterior",
    "VolumeMismatch",
    "__version__",
]
