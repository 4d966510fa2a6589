"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A physical or numerical parameter is out of its allowed range."""


class StructuralError(ValueError):
    """Basis labels, dimensions, or operator structure are inconsistent."""


class IntegrationError(RuntimeError):
    """Time integration produced non-finite values or breached a tolerance."""

    def __init__(self, message: str, time_ps: float | None = None):
        if time_ps is not None:
            message = f"{message} (at t = {time_ps:.6g} ps)"
        super().__init__(message)
        self.time_ps = time_ps
