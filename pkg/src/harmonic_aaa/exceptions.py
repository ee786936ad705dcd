class InvalidInput(ValueError):
    """Input violates a documented precondition."""


class NumericalFailure(ArithmeticError):
    """A dense factorization or eigen-solve did not produce a usable result."""
