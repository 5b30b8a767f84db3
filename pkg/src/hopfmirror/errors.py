"""Exception types raised across the package."""

from __future__ import annotations


class HopfMirrorError(ValueError):
    """Base class for every error raised by this package."""


class InsufficientDataError(HopfMirrorError):
    pass


class UncoveredCaseError(HopfMirrorError):
    """Tensor label is not determined by the product rules."""


class NegativeDegreeError(HopfMirrorError):
    pass


class ProjectionFailureError(HopfMirrorError):
    """A product did not lie in the span of the target section basis."""


class NonIntegralExponentError(HopfMirrorError):
    pass


class ThresholdViolationError(HopfMirrorError):
    """Perturbation slopes do not separate the pair transversely."""


class DegreeMismatchError(HopfMirrorError):
    pass


class DegenerateTriangleError(HopfMirrorError):
    pass


class NotASectionError(HopfMirrorError):
    pass


class InvalidSpecError(HopfMirrorError):
    pass
