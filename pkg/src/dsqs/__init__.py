"""Discrete squeezed states on the N x N phase space of an odd-dimensional system."""

from .errors import (
    DomainError,
    DsqsError,
    IllConditionedKernelError,
    InvalidDistributionError,
    NumericalConsistencyError,
    SingularityError,
    StateSpecError,
)
from .numerics import LatticeDims

__version__ = "0.1.0"
