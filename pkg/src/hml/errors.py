"""Exception types shared across the package."""


class HmlError(Exception):
    """Base class for package errors."""


class DivergenceError(HmlError):
    """An integral or sum is infinite (or the measure itself is)."""


class NonConvergenceError(HmlError):
    """Quadrature refinement failed to meet its certification tolerance."""


class PrecisionError(HmlError):
    """A truncation tail bound exceeds the requested tolerance."""


class ParameterError(HmlError):
    """Invalid parameters (e.g. a Gamma argument at a nonpositive integer)."""


class TruncationError(HmlError):
    """The requested operation needs a larger series truncation."""


class GateError(HmlError):
    """A well-definedness gate failed for the requested space."""
