"""Exception types shared across the package.

Everything that stems from a caller handing us bad values subclasses
ValueError so generic handling stays possible; DivergenceError is the one
runtime failure mode (non-finite iterates inside a solver loop).
"""


class InvalidDimensionError(ValueError):
    """Matrix or image has an unusable shape (empty, mismatched, too small)."""


class ScaleTooLargeError(ValueError):
    """Patch size exceeds the image extent."""


class InvalidCutoffError(ValueError):
    """Frequency cutoff q outside 1..p."""


class InvalidRankError(ValueError):
    """Truncation rank outside 0..min(N, M)."""


class InvalidInputError(ValueError):
    """Input contains non-finite entries."""


class InsufficientDataError(ValueError):
    """No observed pixels to work from (or a missing ratio of 1)."""


class ConfigError(ValueError):
    """Bad configuration value, unknown method label, unparseable config file."""


class DivergenceError(ArithmeticError):
    """A solver iterate became non-finite; the step size is too large."""
