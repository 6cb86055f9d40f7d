"""
Shared exception hierarchy.

Service modules derive their own error families from ProdwidthError so the
command line can map every failure to an exit code in one place.
"""


class ProdwidthError(Exception):
    """Base exception for all prodwidth errors."""

    pass


class ParameterError(ProdwidthError):
    """Raised when numeric parameters violate a documented precondition."""

    pass


class GraphSizeError(ProdwidthError):
    """Raised when a construction would exceed the supported vertex count."""

    pass


class BudgetExceededError(ProdwidthError):
    """Raised when an exhaustive search is asked to run beyond its advisory size."""

    def __init__(self, operation: str, size: int, limit: int):
        self.operation = operation
        self.size = size
        self.limit = limit
        super().__init__(
            f"{operation}: input size {size} exceeds advisory limit {limit} "
            "(raise it with PRODWIDTH_BUDGET or force the call)"
        )


class InvalidCertificateError(ProdwidthError):
    """Raised when a certificate handed to a construction does not validate."""

    def __init__(self, message: str, violations=None):
        self.violations = list(violations or [])
        super().__init__(message)
