"""Exception hierarchy shared across the package."""


class QkolabError(Exception):
    """Base class for all package errors."""


class InputError(QkolabError):
    """Malformed or inconsistent caller input (CLI exit code 2)."""


class CapError(QkolabError):
    """A resource cap (qubit count, outcome count, ...) was exceeded (CLI exit code 3)."""


class DecodeError(QkolabError):
    """A serialized payload could not be decoded; carries the failing bit offset."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (bit offset {offset})")
        self.offset = offset
