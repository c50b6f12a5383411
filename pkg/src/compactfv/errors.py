"""Exception types used across the package."""


class CompactFVError(Exception):
    """Base class for all package errors."""


class ConfigurationError(CompactFVError):
    """Invalid grid, problem, or run configuration."""


class EvaluationError(CompactFVError):
    """A user-supplied function produced a non-finite value or failed to converge."""


class SolverError(CompactFVError):
    """A per-cell nonlinear solve did not converge."""


class UsageError(CompactFVError):
    """An operation was called on an incompatible problem kind."""
