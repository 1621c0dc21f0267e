"""Exception hierarchy shared by every skolemlab module."""


class SkolemLabError(Exception):
    """Base class for all library errors."""


class GroupMismatch(SkolemLabError):
    pass


class FieldMismatch(SkolemLabError):
    pass


class SubfieldMismatch(SkolemLabError):
    pass


class DivisionByZero(SkolemLabError, ZeroDivisionError):
    pass


class NotIrreducible(SkolemLabError, ValueError):
    pass


class NotFound(SkolemLabError):
    pass


class NegativeValuation(SkolemLabError):
    pass


class Unsatisfiable(SkolemLabError):
    pass


class ZeroDenominator(SkolemLabError, ZeroDivisionError):
    pass


class UndefinedComposite(SkolemLabError):
    pass


class DegreeOverflow(SkolemLabError):
    pass


class ZeroPolynomial(SkolemLabError, ValueError):
    pass


class ZeroFunction(SkolemLabError, ValueError):
    pass


class InconsistentConstraints(SkolemLabError):
    pass


class NotInDomain(SkolemLabError):
    pass


class DepthExceeded(SkolemLabError):
    pass


class PoleAtSample(SkolemLabError):
    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = tuple(offending)


class NotABasis(SkolemLabError):
    pass


class MNotPrincipal(SkolemLabError):
    pass


class ZeroSecond(SkolemLabError, ValueError):
    pass


class UnsupportedScene(SkolemLabError):
    pass


class SceneMismatch(SkolemLabError):
    pass


class SchemaError(SkolemLabError):
    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ExprSyntaxError(SkolemLabError, SyntaxError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class RationalExponentNotAllowed(SkolemLabError):
    pass


class UnknownSymbol(SkolemLabError):
    pass


class FilterError(SkolemLabError):
    """Filter axioms violated, or a non-principal ultrafilter was requested."""
