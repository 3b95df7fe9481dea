"""
Domain exceptions for RIONEPS detection.

Library code raises these; management commands map them to exit codes and the
REST layer maps them to 400 responses (see rioneps.utils).
"""


class RionepsError(Exception):
    """Base class for every error raised by the detection library."""


class ConfigurationError(RionepsError, ValueError):
    """Invalid sample rate, window size, threshold or flag combination."""


class TraceInputError(RionepsError, ValueError):
    """Input data that cannot be analysed as given (too short, mismatched lengths)."""


class WindowBoundsError(RionepsError, IndexError):
    """A window that does not fit inside the trace."""


class IngestError(RionepsError):
    """
    A trace file that cannot be read or parsed.

    Carries the offending path and, when known, the 1-based line number so the
    CLI can report file/line context.
    """

    def __init__(self, message, path=None, line_number=None):
        self.path = path
        self.line_number = line_number
        location = ''
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ': '
        super().__init__(f"{location}{message}")


class StreamStateError(RionepsError):
    """A streaming detector used after flush() without reset()."""
