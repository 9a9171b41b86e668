"""Exception hierarchy shared by the engine and the command line front end."""


class HKError(Exception):
    """Base class for every error raised by hkgood."""


class InvalidHomomorphism(HKError):
    """A matrix does not send source relations into the target relation lattice."""

    def __init__(self, message, relation_index=None):
        super().__init__(message)
        self.relation_index = relation_index


class NotAnAutomorphism(HKError):
    def __init__(self, message, generator_index=None):
        super().__init__(message)
        self.generator_index = generator_index


class NotAComplex(HKError):
    """Consecutive differentials do not compose to zero."""


class NotAChainMap(HKError):
    pass


class NonCommuting(HKError):
    """A declared automorphism does not commute with the differentials."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class NotShortExact(HKError):
    pass


class LiftFailure(HKError):
    """A preimage needed for a connecting map does not exist."""


class AmbiguousExtension(HKError):
    """A group is only known up to an extension problem."""


class PrecisionExhausted(HKError):
    """The supplied continued fraction prefix cannot decide a comparison."""


class NotACycle(HKError):
    pass


class NotIntegral(HKError):
    """An integral identification was requested without a passing Chern verdict."""


class HypothesisViolated(HKError):
    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class SearchBudgetExceeded(HKError):
    pass


class ModelError(HKError):
    """Malformed model file or model data; carries an optional source position."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        elif path:
            where = f" (at {path})"
        super().__init__(message + where)
