"""Exception hierarchy shared by every module of the package."""


class SymmaxError(Exception):
    """Base class for all errors raised by symmax."""


class NotAssociative(SymmaxError):
    """A value was requested from an encoding that does not fulfil associativity."""


class NotMadeAssociative(SymmaxError):
    """A rule left a nonassociative residue on some input."""


class ParseError(SymmaxError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownRule(SymmaxError, KeyError):
    """An ``@name`` reference is not present in the registry."""

    def __str__(self):
        return Exception.__str__(self)


class NotWellFormed(SymmaxError):
    """A rule does not make every sequence associative."""


class PreconditionFailed(SymmaxError):
    pass


class MismatchedBase(SymmaxError):
    """Two deletion profiles were recorded against different encodings."""


class NoCommonUpperBoundInInterval(SymmaxError):
    pass


class InfiniteSupport(SymmaxError):
    pass


class AbsorbingFactor(SymmaxError):
    pass


class TooLarge(SymmaxError):
    pass
