class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class SpecError(ValueError):
    """A model specification violates its parameter constraints."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InsufficientDataError(ValueError):
    """Too few exceedances (or observations) for an estimator."""
