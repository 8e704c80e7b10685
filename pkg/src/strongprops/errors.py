"""Exception types shared across the package."""


class StrongPropsError(Exception):
    """Base class for every error raised by this package."""


class InputError(StrongPropsError):
    """Invalid input: bad dimensions, non-finite entries, class mismatch."""


class ParseError(InputError):
    """Malformed input file; the message carries the source name and line number."""


class InternalCheckError(StrongPropsError):
    """A mandatory internal cross-check failed (e.g. primal/dual disagreement)."""


class SurjectivityFailure(StrongPropsError):
    """The derivative at zero is not surjective: the base matrix lacks the
    strong property required by the requested realization."""


class NoConvergence(StrongPropsError):
    """Gauss-Newton ran out of iterations, or a homotopy stalled.

    ``best_residual`` holds the smallest residual seen; ``trace`` the
    residual history, so callers can decide whether to shrink the step.
    """

    def __init__(self, message, best_residual=None, trace=()):
        super().__init__(message)
        self.best_residual = best_residual
        self.trace = tuple(trace)


class PatternViolation(StrongPropsError):
    """The realized matrix left the required pattern class (step too large)."""


class PropertyNotPreserved(PatternViolation):
    """The realized matrix lost its strong property; treat like a pattern
    violation: shrink the step and retry."""


class TargetError(StrongPropsError):
    """The requested target is not reachable from the base matrix."""


class NotARefinement(TargetError):
    pass


class UnreachableInertia(TargetError):
    pass


class NotASuperpattern(TargetError):
    pass


class HypothesisFailure(StrongPropsError):
    """A certification hypothesis (nilpotency, class membership, nSSP) failed."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = dict(details or {})
