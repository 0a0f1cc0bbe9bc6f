"""Exception hierarchy shared across the pipeline."""


class NoteForgeError(Exception):
    """Base class for all note-forge errors."""


class SchemaError(NoteForgeError):
    """CSV header does not match the declared table schema."""


class ValidationError(NoteForgeError):
    """Input violates a documented precondition."""


class GatewayError(NoteForgeError):
    """Model gateway request failed."""

    def __init__(self, message: str, *, endpoint: str = "", status: int | None = None):
        super().__init__(message)
        self.endpoint = endpoint
        self.status = status


class CapabilityError(GatewayError):
    """Endpoint does not advertise the requested capability."""


class ScorecardParseError(NoteForgeError):
    """Judge response is missing one or more criterion scores."""

    def __init__(self, missing: list[str]):
        super().__init__(f"missing criterion scores: {', '.join(missing)}")
        self.missing = missing
