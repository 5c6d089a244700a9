"""Versioned document schemas."""

from . import schemas  # noqa: F401
