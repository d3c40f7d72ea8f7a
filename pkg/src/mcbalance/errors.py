"""Exception hierarchy.

Numerical degeneracies (``DegenerateWhitePoint``, ``ColinearTargetColors``)
map to CLI exit status 2; configuration and I/O problems map to 1.
"""


class McBalanceError(Exception):
    """Base class for every error raised by this package."""


class DomainError(McBalanceError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateError(McBalanceError, ArithmeticError):
    """A correction matrix cannot be built from the given colors."""


class DegenerateWhitePoint(DegenerateError):
    """A white point has a (near) zero coordinate in the adaptation basis."""


class ColinearTargetColors(DegenerateError):
    """The three source target colors do not span XYZ space."""

    def __init__(self, message, condition=float("inf"), labels=None):
        super().__init__(message)
        self.condition = condition
        self.labels = tuple(labels) if labels else ()


class ColorSpaceMismatch(McBalanceError, TypeError):
    """An image buffer carries the wrong color-space tag for the operation."""


class ImageError(McBalanceError, OSError):
    """Base class for image I/O failures."""


class UnreadableImage(ImageError):
    """The file is missing or cannot be opened."""


class UnsupportedFormat(ImageError):
    """The file is not a PNG or binary PPM, or uses an unsupported variant."""


class CorruptImage(ImageError):
    """The header or pixel payload is malformed or truncated."""


class ConfigError(McBalanceError, ValueError):
    """A job or scene description failed validation."""
