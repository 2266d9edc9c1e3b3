"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for structural failures."""


class NotChainComplex(AlgebraError):
    pass


class NotChainMap(AlgebraError):
    pass


class NotQuasiIso(AlgebraError):
    pass


class NoHomotopyInverse(NotQuasiIso):
    pass


class CollectionMismatch(AlgebraError):
    pass


class ObjectActionMismatch(AlgebraError):
    pass


class NotFunctor(AlgebraError):
    pass


class NotModuleMorphism(AlgebraError):
    pass


class MissingWitness(AlgebraError):
    pass


class BrokenChain(AlgebraError):
    pass


class TriangleFailure(AlgebraError):
    pass


class LengthMismatch(AlgebraError):
    pass


class TupleMismatch(AlgebraError):
    pass


class EvenL(AlgebraError):
    pass


class EvenIndex(AlgebraError):
    pass


class LTooSmall(AlgebraError):
    pass


class MissingEndComparison(AlgebraError):
    pass


class NotACycle(AlgebraError):
    pass


class NotAcyclic(AlgebraError):
    pass


class UnknownObject(AlgebraError):
    pass


class ParseError(Exception):
    """Malformed instance text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class DimensionError(ParseError):
    """Well-formed text whose widths or indices disagree with declared dimensions."""
