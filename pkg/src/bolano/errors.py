"""Exception types shared across the package."""


class BolanoError(Exception):
    """Base class for errors raised by this package."""


class ParseError(BolanoError):
    """Rejected input text; carries a byte offset and the expected tokens."""

    def __init__(self, message, position=None, expected=()):
        self.position = position
        self.expected = tuple(expected)
        suffix = ""
        if position is not None:
            suffix += f" at offset {position}"
        if self.expected:
            suffix += " (expected " + " | ".join(self.expected) + ")"
        super().__init__(message + suffix)


class NonIntegerLadderPower(BolanoError):
    """A subexpression containing a ladder operator was raised to a negative
    or non-integer power."""


class UnsupportedPower(BolanoError):
    """A scalar power whose exact value is not representable here."""


class UnsupportedBounds(BolanoError):
    """Sum or product bounds that do not form a finite integer range."""


class ComplexSymbolUnsupported(BolanoError):
    """Conjugation touched a symbol that is not assumed real."""


class MissingSubstitution(BolanoError):
    """A symbol had no value in a numeric substitution map."""


class EmptyObservable(BolanoError):
    """The observable polynomial is zero."""


class UnsupportedObservable(BolanoError):
    """The observable does not normal-order to a single unit-coefficient
    monomial, so it cannot label the left-hand side of an evolution
    equation."""


class RecordError(BolanoError):
    """A structured record failed validation."""


class InternalError(BolanoError):
    """An internal invariant was violated; indicates a bug, not bad input."""
