"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: configuration, model and
usage errors exit with code 2, failed verification with code 1.
"""


class SpinBosonError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SpinBosonError, ValueError):
    """Invalid configuration value or malformed config document."""


class ModelError(SpinBosonError, ValueError):
    """Model data violates a physical requirement (negative dispersion, dead coupling)."""


class UsageError(SpinBosonError, ValueError):
    """API misuse: mismatched lengths, unknown branch labels, oversize direct solves."""


class DomainError(SpinBosonError, ValueError):
    """Spectral parameter outside the admissible half-line z < sigma*eps."""


class NumericalError(SpinBosonError, RuntimeError):
    """A numerical procedure failed to converge or lost its certified accuracy."""
