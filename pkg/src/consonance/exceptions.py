'''
Error types raised by the consonance package.

The CLI maps ConfigError (and argparse usage errors) to exit code 2 and every
other ConsonanceError to exit code 1.
'''


class ConsonanceError(Exception):
    """Base class for all errors raised by this package."""


class ToneError(ConsonanceError, ValueError):
    """Invalid tone parameters (non-positive frequency, bad amplitudes, ...)."""


class ZeroVectorError(ConsonanceError, ValueError):
    """Cosine similarity requested for a vector of zero norm."""


class LengthMismatchError(ConsonanceError, ValueError):
    """Vectors of different lengths passed to a cosine similarity."""


class NonConvergenceError(ConsonanceError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance within the panel budget."""


class EmptyCurveError(ConsonanceError, ValueError):
    """Peak detection needs at least 3 curve points."""


class CurveParseError(ConsonanceError, ValueError):
    """A curve document could not be parsed."""

    def __init__(self, message: str, line: int = None, offset: int = None):
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", offset {offset})" if offset is not None else ")")
        super().__init__(message + location)
        self.line = line
        self.offset = offset


class CurveSchemaError(ConsonanceError, ValueError):
    """A curve is structurally invalid, or a JSON curve document lacks required metadata."""


class ConfigError(ConsonanceError, ValueError):
    """Invalid run configuration: ratio grid, detection parameters or command-line flags."""
