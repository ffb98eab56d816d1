"""Exception hierarchy shared by every stage of the pipeline."""


class LeadLagError(ValueError):
    """Base class for all errors raised by this package."""


class InputError(LeadLagError):
    """Problem with user-supplied data (CLI exit code 2)."""


class ConfigError(LeadLagError):
    """Problem with run parameters (CLI exit code 3)."""


# ingest
class EmptyInput(InputError):
    pass


class MalformedRow(InputError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class DuplicateDate(InputError):
    pass


class NonPositiveValue(InputError):
    pass


class EmptyIntersection(InputError):
    pass


class TooShort(InputError):
    pass


class DegenerateRange(InputError):
    pass


# lattice
class LengthMismatch(InputError):
    pass


class ParityViolation(LeadLagError):
    pass


class OutOfBounds(LeadLagError):
    pass


# engine
class NonPositiveTemperature(ConfigError):
    pass


class NumericalOverflow(LeadLagError):
    pass


# oracle
class TooLarge(ConfigError):
    pass


# synth
class InvalidProfile(ConfigError):
    pass


# stats
class DegenerateSeries(InputError):
    pass


class SingularRegression(LeadLagError):
    pass


class EmptyPath(InputError):
    pass
