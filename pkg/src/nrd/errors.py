"""Exception types shared across the package.

Everything raised on purpose derives from :class:`NrdError`, so callers can
catch one base class at API boundaries (the CLI maps subfamilies to exit
codes).  Precondition failures and numerical failures are kept as separate
branches of the hierarchy.
"""

from __future__ import annotations

__all__ = [
    "NrdError",
    "PreconditionError",
    "NumericalError",
    "ParameterConstraintViolated",
    "NotDestabilizable",
    "BaseStateUnstable",
    "DegenerateCase",
    "DegenerateBifurcation",
    "LengthMismatch",
    "MismatchAt",
    "InternalInconsistency",
    "NonFiniteState",
    "WindowTooShort",
    "NegativeDensityWarning",
]


class NrdError(Exception):
    """Base class for all deliberate errors raised by this package."""


class PreconditionError(NrdError):
    """An analysis was requested outside its domain of validity."""


class NumericalError(NrdError):
    """A numerical routine failed to produce a trustworthy result."""


class ParameterConstraintViolated(PreconditionError):
    """Model parameters violate a structural constraint (e.g. a sign condition)."""


class NotDestabilizable(PreconditionError):
    """The base state cannot be destabilized by diffusion for any mode."""


class BaseStateUnstable(PreconditionError):
    """The spatially constant base state is already unstable without diffusion."""


class DegenerateCase(PreconditionError):
    """A classification quantity sits on a boundary between cases."""


class DegenerateBifurcation(PreconditionError):
    """Both the first and second branch coefficients vanish; direction undecidable."""


class LengthMismatch(PreconditionError):
    """A field array does not match the expected grid resolution."""


class MismatchAt(NumericalError):
    """Interval verification found a wavenumber where prediction and spectrum disagree.

    Carries the offending value of p = lambda as ``.p``.
    """

    def __init__(self, p: float, message: str = "") -> None:
        self.p = float(p)
        super().__init__(message or f"instability-interval mismatch at p = {p!r}")


class InternalInconsistency(NumericalError):
    """Two independent evaluation paths of the same quantity disagree."""


class NonFiniteState(NumericalError):
    """The simulated state became non-finite or exceeded the blow-up guard."""

    def __init__(self, t: float, message: str = "") -> None:
        self.t = float(t)
        super().__init__(message or f"state became non-finite near t = {t:g}")


class WindowTooShort(NumericalError):
    """Too few samples inside the linear-growth window for a trustworthy fit."""


class NegativeDensityWarning(UserWarning):
    """A simulated density dipped below zero (reported, not fatal)."""
