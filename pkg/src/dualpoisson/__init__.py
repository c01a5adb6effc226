"""Classical and two-qubit quantum causal models of dual Poisson processes."""

from .errors import CompletionError, DegenerateParametersError, InvalidParameterError
from .process import DiscreteParams, ProcessParams, discretize

__all__ = [
    "CompletionError",
    "DegenerateParametersError",
    "DiscreteParams",
    "InvalidParameterError",
    "ProcessParams",
    "discretize",
]
__version__ = "0.1.0"
