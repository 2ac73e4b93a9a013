"""Exception types raised across the package."""


class LameError(Exception):
    """Base class for all package errors."""


class DuplicateAbscissa(LameError, ValueError):
    pass


class NonpositiveCharge(LameError, ValueError):
    pass


class DegreeZero(LameError, ValueError):
    pass


class DegreeTooLarge(LameError, ValueError):
    pass


class SpectrumNotReal(LameError, ArithmeticError):
    pass


class CountMismatch(LameError, ArithmeticError):
    pass


class TheoremViolation(LameError, AssertionError):
    """A counting statement failed numerically; carries the offending label."""

    def __init__(self, k, j, witness, message=""):
        self.k = k
        self.j = j
        self.witness = witness
        super().__init__(message or f"k={k} j={j} witness={witness!r}")


class Collision(LameError, ArithmeticError):
    pass


class NoConvergence(LameError, ArithmeticError):
    def __init__(self, message, best_residual=float("nan")):
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3e})")


class LabelMismatch(LameError, ValueError):
    pass


class DegreeMismatch(LameError, ValueError):
    pass


class IndexOutOfRange(LameError, IndexError):
    pass


class BadExponent(LameError, ValueError):
    pass


class OutOfSupport(LameError, ValueError):
    pass


class OutOfRange(LameError, ValueError):
    pass


class EmptySample(LameError, ValueError):
    pass


class ShortSequence(LameError, ValueError):
    pass
