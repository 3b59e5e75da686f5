"""Exception hierarchy shared across the package."""


class StudentFamilyError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(StudentFamilyError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class OrderingError(StudentFamilyError, ValueError):
    """A pair of parameters violates a required strict ordering (e.g. p < q)."""


class QuadratureError(StudentFamilyError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ConvergenceError(StudentFamilyError, RuntimeError):
    """An iterative evaluation (continued fraction, series) did not converge."""


class MeasureConsistencyError(StudentFamilyError, ValueError):
    """A supplied density rho does not satisfy d(mu_b) = rho d(mu_a)."""


class UnsupportedFamilyError(StudentFamilyError, ValueError):
    """The requested classification is only available for named families."""
