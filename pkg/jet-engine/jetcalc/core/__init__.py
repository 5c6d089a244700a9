"""Core algebra, jets, groups, covariant calculus, identities and reduction."""

from .fields import ClassicalConnectionJet, LinearConnectionJet, TensorFieldJet, Valence  # noqa: F401
from .groups import WGroupElement  # noqa: F401
from .models import CheckReport, FactorizationReport, SolveTrace  # noqa: F401
from .reduction import ReducedDataFirst, ReducedDataSecond  # noqa: F401
from .series import TruncatedSeries  # noqa: F401
