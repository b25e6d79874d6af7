"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """A computation was refused because it exceeds a configured size cap."""
