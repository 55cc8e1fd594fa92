"""Exception taxonomy shared across the package.

Three failure families show up everywhere and map onto distinct CLI exit
codes, so they get their own types:

* ``UsageError``    -- the caller handed us something malformed (bad point id,
                       nonpositive radius, asymmetric distance spec, ...).
* ``DomainError``   -- the input is well formed but the operation is not
                       defined on it (edgeless graph normalisation, M < 1).
* ``ConstructionError`` -- an internal build-time invariant failed; this is a
                       bug or a genuinely broken instance, never user error.
* ``CertificationError`` -- a certification run found a structural violation,
                       e.g. a spanner edge outside the allowed edge universe.
"""

from __future__ import annotations

__all__ = [
    "UsageError",
    "DomainError",
    "ConstructionError",
    "CertificationError",
]


class UsageError(ValueError):
    """Malformed arguments or input data."""


class DomainError(ValueError):
    """Operation undefined for this (otherwise well formed) input."""


class ConstructionError(RuntimeError):
    """A build-time invariant did not hold."""


class CertificationError(RuntimeError):
    """Certification found a structural violation (not a mere bound failure)."""
