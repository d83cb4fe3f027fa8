"""Exception types shared across the toolkit."""

from __future__ import annotations


class PdfuzzError(Exception):
    """Base class for all toolkit errors."""


class EncodingError(PdfuzzError):
    """A character cannot be represented in the document's byte encoding."""

    def __init__(self, char: str, index: int, encoding: str):
        self.char = char
        self.index = index
        self.encoding = encoding
        super().__init__(
            f"character {char!r} at index {index} is not encodable as {encoding}"
        )


class ConfigError(PdfuzzError):
    """A configuration value is unusable (zero-width text area, bad corpus...)."""


class ParseError(PdfuzzError):
    """Structural failure while reading a PDF file or content stream."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class InterpretError(PdfuzzError):
    """A content stream cannot be interpreted (e.g. text shown before Tf)."""


class ContractError(PdfuzzError):
    """Caller violated an explicit precondition, such as a length mismatch."""
