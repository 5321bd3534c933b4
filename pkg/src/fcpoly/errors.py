"""Exception types shared across the package."""


class FcpolyError(Exception):
    """Base class for all library errors."""


class IndexOutOfRange(FcpolyError, ValueError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class NoRuleApplies(FcpolyError, ValueError):
    pass


class WordSyntaxError(FcpolyError, ValueError):
    pass


class SizeLimit(FcpolyError, ValueError):
    pass


class InvalidQuotient(FcpolyError, RuntimeError):
    pass


class NotASphereCandidate(FcpolyError, ValueError):
    pass


class UnsupportedDim(FcpolyError, ValueError):
    pass


class NonReducible(FcpolyError, RuntimeError):
    pass


class MalformedTuple(FcpolyError, ValueError):
    pass


class InhomogeneousOperand(FcpolyError, ValueError):
    pass


class DegreeMismatch(FcpolyError, ValueError):
    pass


class UsageError(FcpolyError):
    """Bad command-line input (exit status 2)."""


class CheckFailure(FcpolyError):
    """A verification did not pass (exit status 1)."""
