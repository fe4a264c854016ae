"""Exception and warning types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ThresholdError(DomainError):
    """A truncated series was asked for an argument beyond its certified range."""


class PrecisionError(ArithmeticError):
    """A numerical evaluation could not certify the requested accuracy."""


class ConvergenceError(RuntimeError):
    """A summation hit its caps before the truncation criterion was met.

    The partial result is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConfigError(ValueError):
    """A configuration file or override could not be interpreted."""


class DebyeDomainWarning(UserWarning):
    """The Debye expansion was evaluated outside its validated domain."""
