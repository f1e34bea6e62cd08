"""Exception types shared across the package."""


class RhtError(Exception):
    """Base class for user-facing errors (bad input, violated preconditions)."""


class InvariantViolation(RhtError):
    """An internal invariant failed; this indicates a bug, not bad input."""


class TruncationError(RhtError):
    pass


class JacobiViolation(RhtError):
    def __init__(self, triple, message=None):
        self.triple = triple
        super().__init__(message or f"Jacobi identity fails on basis triple {triple}")


class NonConnected(RhtError):
    pass


class NotDefined(RhtError):
    pass


class NotOneFormal(RhtError):
    pass


class NotNilpotent(RhtError):
    pass


class NotMHS(RhtError):
    pass


class HypothesisViolation(RhtError):
    def __init__(self, bidegree, message=None):
        self.bidegree = bidegree
        super().__init__(message or f"conjugation hypothesis fails at {bidegree}")


class FiltrationNotDStable(RhtError):
    pass


class NotBigradeable(RhtError):
    pass


class ValidationFailed(RhtError):
    def __init__(self, report, message=None):
        self.report = report
        failed = [c.name for c in getattr(report, "checks", []) if not c.passed]
        super().__init__(message or f"validation failed: {', '.join(failed) or 'see report'}")
