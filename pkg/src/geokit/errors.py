"""Exception hierarchy shared by every geokit module."""


class GeokitError(Exception):
    """Base class for all toolkit errors."""


# cyclotomic arithmetic
class NotAUnit(GeokitError, ArithmeticError):
    pass


class SingularMatrix(GeokitError, ArithmeticError):
    pass


# integer lattice
class NotPrime(GeokitError, ValueError):
    pass


# presentations
class UnknownGenerator(GeokitError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class WordSyntaxError(GeokitError, ValueError):
    pass


# geography
class NonIntegralGenus(GeokitError, ValueError):
    pass


class NegativeGenus(GeokitError, ValueError):
    pass


class GenusMismatch(GeokitError, ValueError):
    pass


class SquareMismatch(GeokitError, ValueError):
    pass


class UnsupportedIntersectionPattern(GeokitError, ValueError):
    pass


class MissingPresentation(GeokitError, ValueError):
    pass


class UnknownSurface(GeokitError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class HalfIntegerB2(GeokitError, ValueError):
    pass


class UnknownB1(GeokitError, ValueError):
    pass


class InvariantViolation(GeokitError, ValueError):
    pass


# recipes
class RecipeSyntaxError(GeokitError, ValueError):
    """Malformed recipe text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class UnknownStep(RecipeSyntaxError):
    pass


class ParameterOutOfRange(RecipeSyntaxError):
    pass


class StepError(GeokitError):
    """A recipe step raised; wraps the cause with the step index."""

    def __init__(self, index: int, op: str, cause: Exception):
        self.index = index
        self.op = op
        self.cause = cause
        super().__init__(f"step {index} ({op}): {type(cause).__name__}: {cause}")
