"""Exceptions raised by affgroup."""


__all__ = [
    "AffGroupError",
    "SingularMatrix",
    "InvalidChartPoint",
    "ShapeMismatch",
    "ChartMismatch",
    "NonFiniteSample",
    "EmptySearchBox",
    "ChartTooSmall",
]


class AffGroupError(Exception):
    """Base class for all affgroup errors."""


class SingularMatrix(AffGroupError, ValueError):
    """Matrix determinant is too close to zero for group use."""


class InvalidChartPoint(AffGroupError, ValueError):
    """Chart coordinates outside the Iwasawa chart (s² + t² = 0 or v = 0)."""


class ShapeMismatch(AffGroupError, ValueError):
    """Grids, spectra or lifted signals have incompatible shapes."""


class ChartMismatch(AffGroupError, ValueError):
    """Lifted signals are sampled on different charts."""


class NonFiniteSample(AffGroupError, ArithmeticError):
    """An integrand returned NaN or infinity."""


class EmptySearchBox(AffGroupError, ValueError):
    """An alignment search box contains no nodes."""


class ChartTooSmall(UserWarning):
    """Too much integrand mass sits on the boundary of a truncated chart."""
