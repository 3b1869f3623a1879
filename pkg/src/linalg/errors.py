class DimensionMismatchError(ValueError):
    """Raised when states, sequences or operators disagree on dimension."""


class MalformedMatrixError(ValueError):
    """Raised for non-finite, non-Hermitian or non-unitary input."""


class ConfigError(ValueError):
    """Invalid experiment configuration. The message starts with the field name."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
