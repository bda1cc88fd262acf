"""Exception hierarchy shared by all modules."""


class LabError(Exception):
    """Base class for every error raised by this package."""


class NegativeArgument(LabError, ValueError):
    """A gauge function was evaluated at t < 0; callers must pass |t|."""


class NoConvergence(LabError, RuntimeError):
    """An iterative solver hit its iteration cap without meeting tolerance."""


class UnboundedConjugate(LabError, ValueError):
    """The convex conjugate is +inf beyond a finite slope (asymptotically linear gauge)."""


class NotSupported(LabError, ValueError):
    """The operation is outside the supported configuration space."""


class OutOfDomain(LabError, ValueError):
    """A map was evaluated outside its stated domain."""


class SeamProximity(LabError, ValueError):
    """A finite-difference stencil would straddle a corner seam of a piecewise map."""


class InfeasibleConstraints(LabError, ValueError):
    """The nested-rectangle family does not exist: the feasibility slack is nonpositive."""


class NonMonotoneFamily(LabError, ValueError):
    """The realized rectangle half-widths fail to increase strictly with the action."""


class ContainmentViolation(LabError, RuntimeError):
    """A verified image point escaped its target body.

    Carries the offending point so reports can show a concrete witness.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ConfigError(LabError, ValueError):
    """A run configuration is malformed or violates a documented precondition."""
