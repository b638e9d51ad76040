"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ValueProbeError(Exception):
    exit_code = 1


class ConfigError(ValueProbeError):
    exit_code = 2


class InputError(ValueProbeError):
    """Unreadable or missing input/output path."""

    exit_code = 3


class NetworkError(ValueProbeError):
    exit_code = 4


class AuthenticationError(NetworkError):
    pass


class ValidationError(ValueProbeError, ValueError):
    exit_code = 5


class ParseError(ValidationError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")
