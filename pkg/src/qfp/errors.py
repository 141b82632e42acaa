"""Exception hierarchy shared across the toolkit."""


class QfpError(Exception):
    """Base class for all toolkit errors."""


class DomainError(QfpError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BracketError(QfpError):
    """A root/minimum bracket does not enclose a sign change or minimum."""


class ConvergenceError(QfpError):
    """An iterative routine exhausted its iteration budget."""


class SolverError(QfpError, RuntimeError):
    """A higher-level solve (operating-point search) failed."""


class CapacityError(QfpError, RuntimeError):
    """A requested computation exceeds a configured resource limit."""
