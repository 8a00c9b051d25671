"""Exception hierarchy shared across the toolkit.

The split between :class:`FormatError` and :class:`ValidationError` mirrors
the CLI exit-code contract: malformed input files exit with code 2, inputs
that parse but violate a mathematical invariant exit with code 3.
"""


class AsymkitError(Exception):
    """Base class for all toolkit errors."""


class FormatError(AsymkitError):
    """Input is malformed (bad JSON, missing field, non-square table, ...)."""


class ValidationError(AsymkitError):
    """Input parsed but violates an invariant (non-unitary rep, bad norm, ...)."""


class ConfigurationError(AsymkitError):
    """A numerical configuration cannot support the requested operation."""


class DecompositionError(ValidationError):
    """Representation content is not covered by the supplied irrep table."""

    def __init__(self, message, residual_dim=None):
        super().__init__(message)
        self.residual_dim = residual_dim


class UnknownIrrepError(ValidationError):
    """An irrep label is not present in the table."""


class UnsupportedGroupError(AsymkitError):
    """The operation is not defined for this group kind."""


class ConsistencyError(AsymkitError):
    """Two independent computation routes disagree beyond tolerance."""
