"""Exception types shared across the package."""


class HyperisoError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HyperisoError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class MonotonicityError(DomainError):
    """Density node values decrease, breaking the required convexity."""


class NonConvergence(HyperisoError, RuntimeError):
    """An iterative procedure exhausted its budget before reaching tolerance."""


class BracketError(HyperisoError, ValueError):
    """A root-finding target is not straddled by the supplied bracket."""


class RangeError(HyperisoError, ValueError):
    """A value exceeds the range covered by the configured radial domain."""


class VolumeMismatch(HyperisoError, ValueError):
    """A competitor set does not match the required weighted volume."""


class SingularInterior(HyperisoError, ArithmeticError):
    """A boundary slope reaches +-1 strictly inside the interval."""


class HypothesisViolated(HyperisoError):
    """The hypotheses of the comparison statement fail for this instance."""
