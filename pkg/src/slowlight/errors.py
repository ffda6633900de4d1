"""Exception hierarchy shared by every module of the package."""


class SlowLightError(Exception):
    """Base class for all errors raised by :mod:`slowlight`."""


class DomainError(SlowLightError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class RangeError(SlowLightError, ValueError):
    """An input lies outside the validity range of an empirical model."""


class DegenerateModelError(SlowLightError):
    """The model has no unique steady state (e.g. no relaxation at all)."""


class WeakProbeError(SlowLightError, ValueError):
    """The weak-probe approximation was requested outside its regime."""


class NumericError(SlowLightError, ArithmeticError):
    """A numerical routine produced a non-finite or unreliable result."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ShapeError(SlowLightError, ValueError):
    """A spectrum does not have the shape an operation requires."""


class ResolutionError(SlowLightError, ValueError):
    """A grid is too coarse for the requested derivative."""


class FitError(NumericError):
    """A least-squares fit is ill-conditioned or did not converge."""


class InfeasibleTargetError(SlowLightError, ValueError):
    """Calibration targets cannot be reached inside the given bounds."""

    def __init__(self, message, extrema=None):
        super().__init__(message)
        self.extrema = extrema or {}


class CalibrationError(NumericError):
    """The calibration optimizer failed to meet its tolerance."""


class BoundaryLeakError(SlowLightError, ValueError):
    """A pulse window is too short and the envelope leaks at the edges."""


class CoverageError(SlowLightError, ValueError):
    """A pulse spectrum extends beyond the sampled medium response."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class AlignmentError(SlowLightError, ValueError):
    """Two pulses are not sampled on the same time grid."""


class DegeneratePulseError(SlowLightError, ValueError):
    """A pulse carries no energy."""


class NormalizationError(SlowLightError, ValueError):
    """A spectrum cannot be normalized because it vanishes identically."""


class ConfigError(SlowLightError, ValueError):
    """A scenario file could not be parsed or failed validation."""

    def __init__(self, message, line=None, column=None, field=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.field = field
