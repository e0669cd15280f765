"""Exception hierarchy shared by all modules."""


class ExactPopError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ExactPopError):
    """Bad input: malformed model, config or argument (CLI exit code 2)."""


class NumericalError(ExactPopError):
    """A numerical contract could not be met (CLI exit code 3)."""


class NotHermitian(ValidationError):
    pass


class NotUnitary(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    def __init__(self, message, sweeps=None, off_norm=None):
        super().__init__(message)
        self.sweeps = sweeps
        self.off_norm = off_norm


class DomainError(ValidationError):
    pass


class BadSpin(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class BadBloch(ValidationError):
    pass


class DegenerateInput(ValidationError):
    pass


class ConfigError(ValidationError):
    pass
