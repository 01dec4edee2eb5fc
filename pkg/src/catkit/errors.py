"""Exception hierarchy.

Everything numerical raises a subclass of :class:`CatkitError`; the CLI maps
these to exit code 1 (usage problems exit 2 via argparse).
"""

from __future__ import annotations


class CatkitError(Exception):
    """Base class for all failures raised by this package."""


class DomainError(CatkitError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedOrderError(CatkitError, ValueError):
    """Angular-momentum order outside the supported range."""


class NoFinitePermittivityError(CatkitError):
    """A perfect conductor has no finite permittivity to evaluate."""


class PoleError(CatkitError):
    """Evaluation landed on a pole (zero denominator) of a ratio."""


class ResolutionError(CatkitError):
    """Adaptive refinement could not resolve a branch jump.

    Attributes
    ----------
    interval : tuple[float, float]
        The offending wavevector interval.
    """

    def __init__(self, msg: str, interval: tuple[float, float]):
        super().__init__(msg)
        self.interval = interval


class RootScanError(CatkitError):
    """A characteristic-equation root could not be bracketed.

    Attributes
    ----------
    interval : tuple[float, float]
        The suspect wavevector interval.
    """

    def __init__(self, msg: str, interval: tuple[float, float]):
        super().__init__(msg)
        self.interval = interval


class PairingAmbiguityError(CatkitError):
    """Root-to-mode pairing is ambiguous (shift near a multiple of pi).

    Attributes
    ----------
    bracket : tuple[float, float]
        Wavevector bracket containing the perturbed root.
    """

    def __init__(self, msg: str, bracket: tuple[float, float]):
        super().__init__(msg)
        self.bracket = bracket


class QuadratureToleranceError(CatkitError):
    """Quadrature failed to reach the requested tolerance.

    Attributes
    ----------
    estimate : float
        Best estimate achieved before giving up.
    """

    def __init__(self, msg: str, estimate: float):
        super().__init__(msg)
        self.estimate = estimate


class DegenerateGaussianError(CatkitError):
    """The quadratic form of a Gaussian overlap is not positive definite."""


class InsufficientDataError(CatkitError, ValueError):
    """Not enough points for a requested fit."""
