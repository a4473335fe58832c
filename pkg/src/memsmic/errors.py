"""Exception hierarchy. CLI exit codes are attached to each class."""


class MicError(Exception):
    exit_code = 1


class InvalidInput(MicError, ValueError):
    """Malformed file, unknown key, failed validation or out-of-domain argument."""

    exit_code = 2


class PullInExceeded(MicError):
    """No stable electrostatic equilibrium exists at the requested operating point."""

    exit_code = 3

    def __init__(self, message, bias=None, limit=None, index=None):
        super().__init__(message)
        self.bias = bias
        self.limit = limit
        self.index = index


class Infeasible(MicError):
    """A design search found no point satisfying every constraint."""

    exit_code = 3


class NumericFailure(MicError, ArithmeticError):
    """A root bracket could not be established or an internal self-check failed."""

    exit_code = 4
