"""Encoded sRGB, linear RGB, CIE XYZ and CIELAB conversions.

XYZ values are normalized so that the reference white has ``Y = 1``.  All
conversion functions accept a single triple or any ``(..., 3)`` array and
return float64 arrays of the same shape.
"""

import enum
from typing import NamedTuple

import numpy as np

from ._kernels import SRGB_DECODE_THRESHOLD, SRGB_ENCODE_THRESHOLD
from .errors import DomainError


class ColorXYZ(NamedTuple):
    x: float
    y: float
    z: float


class ColorLab(NamedTuple):
    l: float  # noqa: E741
    a: float
    b: float


# CIE 1931 2-degree observer, Y normalized to 1.
D65 = ColorXYZ(0.95047, 1.00000, 1.08883)
D50 = ColorXYZ(0.96422, 1.00000, 0.82521)

ILLUMINANTS = {"D65": D65, "D50": D50}

# IEC 61966-2-1 linear sRGB -> XYZ (D65), four-decimal form.
SRGB_TO_XYZ = np.array([
    [0.4124, 0.3576, 0.1805],
    [0.2126, 0.7152, 0.0722],
    [0.0193, 0.1192, 0.9505],
])
# Exact inverse of the matrix above rather than the separately rounded
# published inverse, so that the pair round-trips to machine precision.
XYZ_TO_SRGB = np.linalg.inv(SRGB_TO_XYZ)

BRADFORD = np.array([
    [0.8951, 0.2664, -0.1614],
    [-0.7502, 1.7135, 0.0367],
    [0.0389, -0.0685, 1.0296],
])

# Hunt-Pointer-Estevez cone fundamentals normalized to D65, the usual von
# Kries basis in chromatic-adaptation tables.
VON_KRIES = np.array([
    [0.40024, 0.70760, -0.08081],
    [-0.22630, 1.16532, 0.04570],
    [0.00000, 0.00000, 0.91822],
])


class AdaptationModel(enum.Enum):
    """Chromatic adaptation model, identified by its cone-space basis."""

    XYZ_SCALING = "xyz"
    BRADFORD = "bradford"
    VON_KRIES = "vonkries"

    @property
    def basis(self):
        return _BASES[self].copy()

    @property
    def basis_inverse(self):
        return _BASIS_INVERSES[self].copy()

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "xyz": cls.XYZ_SCALING, "xyzscaling": cls.XYZ_SCALING,
            "bradford": cls.BRADFORD,
            "vonkries": cls.VON_KRIES, "hpe": cls.VON_KRIES,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown adaptation model {name!r}") from None


_BASES = {
    AdaptationModel.XYZ_SCALING: np.eye(3),
    AdaptationModel.BRADFORD: BRADFORD,
    AdaptationModel.VON_KRIES: VON_KRIES,
}
_BASIS_INVERSES = {model: np.linalg.inv(m) for model, m in _BASES.items()}
_BASIS_INVERSES[AdaptationModel.XYZ_SCALING] = np.eye(3)


def adaptation_basis(model):
    """Return the 3x3 cone-response basis of ``model`` (a name or enum)."""
    return AdaptationModel.parse(model).basis


def _as_triples(values, what):
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape[-1:] != (3,):
        raise DomainError(f"{what} must have a trailing dimension of 3, got shape {arr.shape}")
    return arr


def srgb_decode(encoded):
    """Gamma-encoded sRGB in [0, 1] to linear-light RGB.

    Raises DomainError for channels outside [0, 1] or non-finite.
    """
    c = _as_triples(encoded, "encoded sRGB")
    if not np.all(np.isfinite(c)) or np.any(c < 0.0) or np.any(c > 1.0):
        raise DomainError("encoded sRGB channels must lie in [0, 1]")
    return np.where(
        c <= SRGB_DECODE_THRESHOLD,
        c / 12.92,
        ((np.maximum(c, SRGB_DECODE_THRESHOLD) + 0.055) / 1.055) ** 2.4,
    )


def srgb_encode(linear):
    """Linear RGB to gamma-encoded sRGB.

    Channels are clamped to [0, 1] first, so out-of-gamut values saturate
    instead of raising.
    """
    v = np.clip(_as_triples(linear, "linear RGB"), 0.0, 1.0)
    p = np.maximum(v, SRGB_ENCODE_THRESHOLD) ** (1.0 / 2.4)
    # p + 0.055 (p - 1) == 1.055 p - 0.055, but lands on exactly 1 at p = 1
    return np.where(v <= SRGB_ENCODE_THRESHOLD, v * 12.92, p + 0.055 * (p - 1.0))


def linear_rgb_to_xyz(rgb):
    return _as_triples(rgb, "linear RGB") @ SRGB_TO_XYZ.T


def xyz_to_linear_rgb(xyz):
    """Inverse of :func:`linear_rgb_to_xyz`; out-of-gamut results are not clamped."""
    return _as_triples(xyz, "XYZ") @ XYZ_TO_SRGB.T


_LAB_EPS = (6.0 / 29.0) ** 3


def _lab_f(t):
    return np.where(t > _LAB_EPS, np.cbrt(t), t / (3.0 * (6.0 / 29.0) ** 2) + 4.0 / 29.0)


def xyz_to_lab(xyz, white=D65):
    """CIE XYZ to CIELAB relative to ``white`` (default D65)."""
    xyz = _as_triples(xyz, "XYZ")
    white = _as_triples(white, "white point")
    if white.shape != (3,) or not np.all(white > 0.0):
        raise DomainError(f"white point components must be positive, got {white}")
    f = _lab_f(xyz / white)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)
