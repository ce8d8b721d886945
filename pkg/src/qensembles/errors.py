"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a structural invariant (hermiticity, trace, norm, ...)."""


class DimensionMismatch(ValidationError):
    """Operands have incompatible dimensions."""


class EnergyRangeError(ValueError):
    """Requested mean energy is outside the achievable interval of a spectrum."""

    def __init__(self, requested, lo, hi):
        self.requested = float(requested)
        self.lo = float(lo)
        self.hi = float(hi)
        super().__init__(
            f"mean energy {requested} outside achievable interval ({lo}, {hi}]"
        )


class TruncationError(ValueError):
    """A truncated representation cannot meet the requested accuracy budget."""


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, gap=None):
        self.gap = gap
        super().__init__(message)
