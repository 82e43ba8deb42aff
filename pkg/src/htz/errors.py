"""Exception hierarchy shared by every htz module.

Everything raised on purpose derives from :class:`HtzError`, which the CLI
maps to exit code 1.
"""


class HtzError(Exception):
    """Base class for domain errors."""


class EmptyMatrixError(HtzError, ValueError):
    pass


class PoleAtSample(HtzError, ZeroDivisionError):
    """A sampled rational function hit a zero of its denominator."""


class SymbolSyntaxError(HtzError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NegativeExponent(HtzError, ValueError):
    pass


class DivergentMellin(HtzError, ValueError):
    pass


class NonConvergence(HtzError, ArithmeticError):
    pass


class TruncationTooSmall(HtzError, ValueError):
    pass


class MismatchedTruncation(HtzError, ValueError):
    pass


class EmptyExactRegion(HtzError, ValueError):
    pass


class InvalidDegrees(HtzError, ValueError):
    pass


class DuplicateExponents(HtzError, ValueError):
    pass


class UnknownSuite(HtzError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown suite"
