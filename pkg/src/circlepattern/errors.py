"""Exception types shared across the package.

Every error raised by the library derives from CirclePatternError, so callers
can catch one base class. The CLI maps these onto its exit-code contract.
"""


class CirclePatternError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CirclePatternError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ParseError(CirclePatternError, ValueError):
    """An input document is malformed."""


class GraphValidationError(CirclePatternError, ValueError):
    """A parsed graph violates a structural invariant."""


class SubsetSizeError(CirclePatternError, ValueError):
    """Exhaustive subset enumeration was requested for too many faces."""


class InfeasibleTargetsError(CirclePatternError, RuntimeError):
    """Curvature targets fail the feasibility test.

    Carries the certificate (a violating face subset, if one was found) so
    callers can report why.
    """

    def __init__(self, message, certificate=None, slack=None):
        super().__init__(message)
        self.certificate = certificate
        self.slack = slack


class ConvergenceError(CirclePatternError, RuntimeError):
    """An iteration failed to reach its tolerance within its budget."""


class QuadratureError(CirclePatternError, RuntimeError):
    """Adaptive quadrature failed to settle within the refinement budget."""


class AuditError(CirclePatternError, RuntimeError):
    """A reconstructed metric failed a Gauss-Bonnet audit identity."""
