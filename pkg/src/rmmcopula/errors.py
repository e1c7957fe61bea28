"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a copula or generator family."""


class ValidationError(ValueError):
    """A generator or copula fails the conditions required by a construction."""


class ConvergenceError(ArithmeticError):
    """A truncated infinite product did not converge within its term budget."""

    def __init__(self, message, terms_used=None):
        super().__init__(message)
        self.terms_used = terms_used


class SamplingError(RuntimeError):
    """Conditional inversion failed (invalid conditional distribution or no mass)."""


class SpecError(ValueError):
    """A copula expression document is malformed; ``path`` locates the bad node."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)
