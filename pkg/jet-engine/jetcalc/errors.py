"""Exception hierarchy shared by every jetcalc module."""

from __future__ import annotations

from typing import Iterable, List, Optional


class JetError(Exception):
    """Base class for engine failures; carries human-readable reasons."""

    def __init__(self, reasons: Iterable[str] | str):
        if isinstance(reasons, str):
            reasons = [reasons]
        self.reasons: List[str] = [r for r in reasons if r]
        super().__init__("; ".join(self.reasons) or self.__class__.__name__)


class DimensionMismatch(JetError):
    """Operands live over different base or fiber dimensions."""


class OrderError(JetError):
    """Trust order too low for the requested operation."""


class SingularError(JetError):
    """A linear or constant part that must be invertible is not."""


class ValenceError(JetError):
    """Slot layout of a tensor does not fit the operation."""


class SymmetryError(JetError):
    """A declared index symmetry is violated."""


class PreconditionError(JetError):
    """Order triple is not admissible for a reduction."""


class NonMembership(JetError):
    """Reduced data admit no reconstruction; records where solving failed."""

    def __init__(self, reasons: Iterable[str] | str, *, stage: str, order: Optional[int] = None):
        self.stage = stage
        self.order = order
        super().__init__(reasons)

    def __str__(self) -> str:
        where = self.stage if self.order is None else f"{self.stage}@{self.order}"
        return f"[{where}] {super().__str__()}"


class SchemaError(JetError):
    """Malformed jetcalc document; ``path`` is a JSON path to the offending node."""

    def __init__(self, reasons: Iterable[str] | str, *, path: str = "$"):
        self.path = path
        super().__init__(reasons)

    def __str__(self) -> str:
        return f"{self.path}: {super().__str__()}"


__all__ = [
    "JetError",
    "DimensionMismatch",
    "OrderError",
    "SingularError",
    "ValenceError",
    "SymmetryError",
    "PreconditionError",
    "NonMembership",
    "SchemaError",
]
