"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside its admissible domain (box bounds, tempering range)."""


class CalibrationError(RuntimeError):
    """A regression problem is under-determined or too ill-conditioned to solve."""


class NumericError(RuntimeError):
    """A numerical operation failed (loss of positive definiteness, non-finite values)."""
