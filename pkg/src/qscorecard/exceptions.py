"""Exception types shared across the package."""


class DegenerateDataError(ValueError):
    """Raised when an operation requires both classes but the data has one."""


class DataFormatError(ValueError):
    """Raised when a dataset file cannot be parsed.

    ``line_number`` is 1-based and includes the header line, so it points at
    the exact offending line of the file.
    """

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number
