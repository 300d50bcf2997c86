"""Exception hierarchy shared by all modules."""


class PStarError(Exception):
    """Base class for library errors."""


class DomainError(PStarError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class NearCriticalError(DomainError):
    """The request is too close to (or beyond) the critical endpoint of the curve."""


class ConvergenceError(PStarError, RuntimeError):
    """A root bracket could not be established or a solve did not converge."""


class ResourceError(PStarError, MemoryError):
    """The requested state space exceeds the configured memory budget."""


class EmptyWindowError(DomainError):
    """No lattice point of the finite-n law falls inside the requested window."""
