"""Exception and warning types shared across the package."""


class ParaloqError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ParaloqError, ValueError):
    """An argument violates a precondition (non-finite, out of range, ...)."""


class ClockRangeError(ParaloqError):
    """ADC clock frequency outside the converter's valid operating window."""


class DeviceTimeoutError(ParaloqError):
    """The device never asserted end-of-conversion within the poll timeout."""


class UnsupportedModeError(ParaloqError):
    """A declared but unimplemented transfer mode was requested."""


class InconsistentReadingError(ParaloqError):
    """Wet/dry pair implies a non-physical (negative) vapor pressure."""


class EmptyRunError(ParaloqError):
    """An operation that needs samples was given a run with none."""


class StorageError(ParaloqError):
    """Log file could not be written; carries the destination path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class CsvParseError(ParaloqError):
    """Log file is malformed; carries the 1-based offending line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class RunAbortedError(ParaloqError):
    """Acquisition stopped early; `partial_run` holds everything acquired."""

    def __init__(self, message, partial_run):
        super().__init__(message)
        self.partial_run = partial_run


class ConfigError(ParaloqError):
    """Config file or flag set failed schema validation."""


class ClockWindowWarning(UserWarning):
    """Clock generator output falls outside the ADC's 10 kHz..1280 kHz window."""


class UndersamplingWarning(UserWarning):
    """A stimulus contains frequency content above half the sample rate."""
