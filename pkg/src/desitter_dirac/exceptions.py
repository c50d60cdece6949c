"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the region where a quantity is defined
    (a coordinate pole, tau <= 0, a forbidden parameter)."""


class DegeneracyError(ArithmeticError):
    """The Romanovski coefficient recurrence hit a vanishing denominator."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class DivergenceError(ArithmeticError):
    """A weighted integral over the real line does not converge."""


class ConvergenceError(RuntimeError):
    """An iterative numerical routine failed to converge."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations
