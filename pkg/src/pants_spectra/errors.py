class DomainError(ValueError):
    """An argument lies outside the domain of a geometric formula."""


class CuspError(DomainError):
    """An operation needs a geodesic boundary but got a cusp (length 0)."""


class ConvergenceError(ArithmeticError):
    """A root solve did not reach the required residual."""
