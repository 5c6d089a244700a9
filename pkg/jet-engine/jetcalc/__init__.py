"""
Exact formal jet calculus: truncated series, connection jets, their jet
groups, covariant calculus and the reduction of natural operators.

Exposes the submodules so `from jetcalc import core, events` works; the
command line lives in `jetcalc.cli`.
"""

from . import api, core, errors, events, settings  # noqa: F401

__all__ = [
    "api",
    "core",
    "errors",
    "events",
    "settings",
]
