"""Exceptions shared across the package."""


class ParameterError(ValueError):
    """An argument lies outside the domain of the model or operation."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature ran out of its subdivision budget.

    The best available estimate is kept on the exception so callers can
    still report it.
    """

    def __init__(self, message, value, error, panels):
        super().__init__(message)
        self.value = value
        self.error = error
        self.panels = panels
