"""Exception hierarchy."""


class DsqsError(Exception):
    """Base class for errors raised by this package."""


class DomainError(DsqsError, ValueError):
    """An argument lies outside the domain of the requested function."""


class SingularityError(DsqsError, ZeroDivisionError):
    """Division by a vanishing quantity (e.g. reciprocal of a jet with zero constant term)."""


class IllConditionedKernelError(DsqsError, ArithmeticError):
    """A kernel value needed as a divisor is too small to divide by."""

    def __init__(self, eta, xi, value):
        self.eta, self.xi, self.value = eta, xi, value
        super().__init__(f"kernel value {value:.3e} at (eta, xi) = ({eta}, {xi}) is too small to divide by")


class NumericalConsistencyError(DsqsError, ArithmeticError):
    """Two routes that must agree (or a quantity that must be non-negative) do not."""


class InvalidDistributionError(DsqsError, ValueError):
    """A grid handed to an entropy functional is not a valid distribution."""


class StateSpecError(DsqsError, ValueError):
    """A state specification could not be parsed."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
