"""Exception types raised across the package."""


class PositivityError(Exception):
    """Base class for package errors."""


class PoleError(PositivityError, ValueError):
    """Argument sits on a pole of the gamma function."""


class DomainError(PositivityError, ValueError):
    """Argument outside the domain of the operation."""


class QuadratureError(PositivityError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class AccuracyLossError(QuadratureError):
    """Quadrature converged but its error estimate exceeds the tolerance."""


class StripError(DomainError):
    """Transform requested outside its strip of convergence."""
