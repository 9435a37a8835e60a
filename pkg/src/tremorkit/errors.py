"""Exception hierarchy.

Two families matter for the CLI exit-code contract: input problems
(:class:`ParseError`, :class:`ValidationError`, and plain ``ValueError``)
map to exit code 2, measurement problems (:class:`MeasurementError` and
subclasses) map to exit code 3.
"""


class ParseError(ValueError):
    """A file does not match its documented format.

    ``line`` is the 1-based line number of the offending row when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(ValueError):
    """Well-formed input whose values violate a declared invariant."""


class MeasurementError(RuntimeError):
    """A measurement could not be produced from otherwise valid input."""


class EmptySelectionError(MeasurementError):
    """None of the requested landmark ids are present in the recording."""


class EmptyWaveformError(MeasurementError):
    """All samples of a track were rejected by the confidence filter."""


class InsufficientDataError(MeasurementError):
    """Too few samples or pairs for the requested computation."""


class DegenerateVarianceError(MeasurementError):
    """Both groups of a t-test have zero variance."""
