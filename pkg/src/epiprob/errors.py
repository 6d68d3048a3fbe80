"""Exception hierarchy shared by every module of the package."""


class EpiprobError(Exception):
    """Base class; the CLI maps any subclass to exit code 3."""


class InvalidPrefix(EpiprobError, ValueError):
    pass


class DimensionMismatch(EpiprobError, ValueError):
    pass


class ModelSyntaxError(EpiprobError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class FormulaSyntaxError(EpiprobError, ValueError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        super().__init__(message + where)


class UnboundVariable(FormulaSyntaxError):
    pass


class UnknownAgent(EpiprobError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownProposition(EpiprobError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ZeroMassObservation(EpiprobError, ValueError):
    pass


class ZeroMassHistory(EpiprobError, ValueError):
    pass


class HorizonTooSmall(EpiprobError, ValueError):
    pass


class UnsupportedUnbounded(EpiprobError, ValueError):
    def __init__(self, subformula):
        self.subformula = subformula
        super().__init__(f"unbounded until outside the qualitative fragment: {subformula}")


class UnsupportedSecondOrder(EpiprobError, ValueError):
    pass


class UnboundedQuantifier(EpiprobError, ValueError):
    pass


class EmptyWord(EpiprobError, ValueError):
    pass


class UnknownLetter(EpiprobError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ZeroPolynomial(EpiprobError, ValueError):
    pass
