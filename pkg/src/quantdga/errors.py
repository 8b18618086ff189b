"""Exception hierarchy. Every domain error derives from ``DomainError``."""


class DomainError(Exception):
    """Base class for errors caused by mathematically invalid input."""


class NonSquareZero(DomainError):
    def __init__(self, generator, value):
        super().__init__(f"d(d({generator})) = {value} != 0")
        self.generator = generator
        self.value = value


class DegreeMismatch(DomainError):
    pass


class AlgebraMismatch(DomainError):
    pass


class NotClosed(DomainError):
    pass


class NotSimplyConnected(DomainError):
    pass


class DegreeCapExceeded(DomainError):
    pass


class UnknownModel(DomainError):
    pass


class InvalidGrading(DomainError):
    pass


class DiagramMismatch(DomainError):
    pass


class WitnessInvalid(DomainError):
    pass


class PrimitiveInvalid(DomainError):
    pass


class EndpointMismatch(DomainError):
    pass


class UnresolvablePrimitive(DomainError):
    pass


class UnregisteredAtom(DomainError):
    pass


class NotACoboundary(DomainError):
    pass


class NotABoundary(DomainError):
    pass


class TooLarge(DomainError):
    pass


class Infeasible(DomainError):
    pass


class Unbounded(DomainError):
    pass


class PresentationSyntaxError(DomainError):
    def __init__(self, line, column, expected, found=None):
        exp = ", ".join(sorted(expected))
        msg = f"line {line}, column {column}: expected one of {{{exp}}}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)
        self.line = line
        self.column = column
        self.expected = frozenset(expected)


class SemanticError(DomainError):
    pass
