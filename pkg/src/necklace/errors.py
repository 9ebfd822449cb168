"""Exception types; the CLI maps each to an exit code."""


class NecklaceError(Exception):
    exit_code = 1


class ValidationError(NecklaceError, ValueError):
    exit_code = 1


class VerificationFailure(NecklaceError):
    exit_code = 2


class BoundExceeded(NecklaceError, ValueError):
    exit_code = 3
