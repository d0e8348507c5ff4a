"""Exception types raised across the package."""


class FibwalkError(Exception):
    """Base class for all package errors."""


class NormalizationError(FibwalkError, ValueError):
    pass


class InvalidCapacityError(FibwalkError, ValueError):
    pass


class CapacityExceededError(FibwalkError, RuntimeError):
    """A step would push amplitude off the end of the lattice."""


class InvalidIndexError(FibwalkError, ValueError):
    pass


class BudgetExceededError(FibwalkError, MemoryError):
    pass


class NonSU2Error(FibwalkError, ValueError):
    pass


class DimensionError(FibwalkError, ValueError):
    pass


class InvalidInvariantError(FibwalkError, ValueError):
    pass


class DivergenceError(FibwalkError, ArithmeticError):
    def __init__(self, step, value):
        super().__init__(f"trace map orbit diverged at step {step} (|coordinate| = {value:.3g})")
        self.step = step
        self.value = value


class LogDomainError(FibwalkError, ValueError):
    pass


class InsufficientDataError(FibwalkError, ValueError):
    pass


class DegenerateSeriesError(FibwalkError, ValueError):
    pass
