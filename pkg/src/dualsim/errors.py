"""Exception types shared across the package."""


class DualityError(Exception):
    """Base class for every error raised by dualsim."""


class DimensionError(DualityError, ValueError):
    """Mismatched or out-of-range dubit counts, indices or shapes."""


class CapacityError(DualityError, MemoryError):
    """A register would exceed the configured dubit cap."""


class NormalizationError(DualityError, ValueError):
    """Coefficients violate a normalization invariant."""


class CoherenceError(DualityError, ValueError):
    """Sub-waves with different coherence tags were combined as amplitudes."""


class ParseError(DualityError, ValueError):
    """Malformed program or DIMACS text."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class OpticsError(DualityError, ValueError):
    """Inconsistent optical port labels or stage wiring."""
