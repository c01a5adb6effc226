"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter is outside its allowed range."""


class DegenerateParametersError(ValueError):
    """The parameters describe a process the requested construction cannot model.

    Raised for equal decay rates, where the two generator states coincide
    (overlap ``g == 1``) and the two-qubit unitary is undefined.
    """


class CompletionError(RuntimeError):
    """Orthonormal completion of the unitary lost rank."""
