"""Exception hierarchy shared by all modules."""


class DiCutError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(DiCutError, ValueError):
    """A parameter is out of range or inconsistent with another one."""


class GraphFormatError(DiCutError, ValueError):
    """Malformed graph input: bad header, bad line, endpoint out of range, self-loop."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(DiCutError, RuntimeError):
    """An internal invariant was violated (improper coloring, oversized tree, ...)."""


class FixtureError(DiCutError, KeyError):
    """A selection fixture does not cover a vertex that needs it."""


class OracleBoundError(DiCutError):
    """The brute-force oracle refuses an instance that is too large."""


class NumericError(DiCutError, ValueError):
    """Non-finite input or a non-positive probability where one is required."""
