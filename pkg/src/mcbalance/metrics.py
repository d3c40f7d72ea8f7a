"""Color-difference metrics: reproduction angular error and CIEDE2000."""

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .colorspace import D65, xyz_to_lab
from .errors import DomainError


@dataclass(frozen=True)
class MetricReport:
    """Both metrics for one region.

    ``angular_error`` is in radians, or ``None`` when the measured color has a
    non-positive component and the ratio is undefined.
    """

    label: str
    angular_error: Optional[float]
    hue_difference: float

    def to_dict(self):
        return asdict(self)


def reproduction_angular_error(adjusted, benchmark):
    """Angle in radians between ``benchmark / adjusted`` and the neutral axis.

    Zero exactly when ``adjusted`` is a positive multiple of ``benchmark``.
    Note the metric is not symmetric in its arguments: inverting the ratio
    vector generally changes its angle to ``(1, 1, 1)``.

    Accepts single triples or broadcastable ``(..., 3)`` arrays.
    """
    est = np.asarray(adjusted, dtype=np.float64)
    ref = np.asarray(benchmark, dtype=np.float64)
    if est.shape[-1:] != (3,) or ref.shape[-1:] != (3,):
        raise DomainError("colors must be XYZ triples")
    if not (np.all(est > 0.0) and np.all(ref > 0.0)):
        raise DomainError("reproduction angular error needs strictly positive components")
    r = ref / est
    # atan2(|r x u|, r . u) keeps full relative precision near zero where
    # arccos(cos) loses half the digits.
    cross = np.stack([r[..., 1] - r[..., 2], r[..., 2] - r[..., 0], r[..., 0] - r[..., 1]], axis=-1)
    angle = np.arctan2(np.linalg.norm(cross, axis=-1), r.sum(axis=-1))
    return float(angle) if angle.ndim == 0 else angle


# -- CIEDE2000 ----------------------------------------------------------------

_POW25_7 = 25.0 ** 7


def _ciede2000_terms(lab1, lab2):
    """Lightness, chroma and hue differences with their weights (kL=kC=kH=1)."""
    lab1 = np.asarray(lab1, dtype=np.float64)
    lab2 = np.asarray(lab2, dtype=np.float64)
    l1, a1, b1 = lab1[..., 0], lab1[..., 1], lab1[..., 2]
    l2, a2, b2 = lab2[..., 0], lab2[..., 1], lab2[..., 2]

    c_bar = (np.hypot(a1, b1) + np.hypot(a2, b2)) / 2.0
    c_bar7 = c_bar ** 7
    g = 0.5 * (1.0 - np.sqrt(c_bar7 / (c_bar7 + _POW25_7)))
    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)
    h1p = np.degrees(np.arctan2(b1, a1p)) % 360.0
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360.0

    chroma_prod = c1p * c2p
    neutral = chroma_prod == 0.0
    dhp = h2p - h1p
    dhp = np.where(dhp > 180.0, dhp - 360.0, dhp)
    dhp = np.where(dhp < -180.0, dhp + 360.0, dhp)
    dhp = np.where(neutral, 0.0, dhp)

    d_l = l2 - l1
    d_c = c2p - c1p
    d_h = 2.0 * np.sqrt(chroma_prod) * np.sin(np.radians(dhp) / 2.0)

    l_bar = (l1 + l2) / 2.0
    cp_bar = (c1p + c2p) / 2.0
    h_sum = h1p + h2p
    far = np.abs(h1p - h2p) > 180.0
    hp_bar = np.where(far, np.where(h_sum < 360.0, h_sum + 360.0, h_sum - 360.0), h_sum) / 2.0
    hp_bar = np.where(neutral, h_sum, hp_bar)

    t = (1.0
         - 0.17 * np.cos(np.radians(hp_bar - 30.0))
         + 0.24 * np.cos(np.radians(2.0 * hp_bar))
         + 0.32 * np.cos(np.radians(3.0 * hp_bar + 6.0))
         - 0.20 * np.cos(np.radians(4.0 * hp_bar - 63.0)))
    d_theta = 30.0 * np.exp(-(((hp_bar - 275.0) / 25.0) ** 2))
    cp_bar7 = cp_bar ** 7
    r_c = 2.0 * np.sqrt(cp_bar7 / (cp_bar7 + _POW25_7))
    l50 = (l_bar - 50.0) ** 2
    s_l = 1.0 + 0.015 * l50 / np.sqrt(20.0 + l50)
    s_c = 1.0 + 0.045 * cp_bar
    s_h = 1.0 + 0.015 * cp_bar * t
    r_t = -np.sin(np.radians(2.0 * d_theta)) * r_c
    return d_l, d_c, d_h, s_l, s_c, s_h, r_t


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def ciede2000_delta_e(lab1, lab2):
    """CIEDE2000 total color difference with unit parametric factors."""
    d_l, d_c, d_h, s_l, s_c, s_h, r_t = _ciede2000_terms(lab1, lab2)
    tl, tc, th = d_l / s_l, d_c / s_c, d_h / s_h
    return _scalar_or_array(np.sqrt(tl * tl + tc * tc + th * th + r_t * tc * th))


def ciede2000_delta_h(adjusted, benchmark):
    """Magnitude of the CIEDE2000 hue difference ``2 sqrt(C1' C2') sin(dh'/2)``.

    This is the unweighted term; it is zero whenever either color is neutral.
    """
    return _scalar_or_array(np.abs(_ciede2000_terms(adjusted, benchmark)[2]))


def color_metrics(measured, benchmark, label="", white_for_lab=D65):
    """Both metrics for one measured XYZ color against its benchmark."""
    measured = np.asarray(measured, dtype=np.float64)
    benchmark = np.asarray(benchmark, dtype=np.float64)
    try:
        angle = reproduction_angular_error(measured, benchmark)
    except DomainError:
        angle = None
    hue = ciede2000_delta_h(xyz_to_lab(measured, white_for_lab), xyz_to_lab(benchmark, white_for_lab))
    if angle is not None and not math.isfinite(angle):
        angle = None
    return MetricReport(label=label, angular_error=angle, hue_difference=float(hue))


def evaluate_region(image, region, benchmark, white_for_lab=D65):
    """Mean XYZ of ``region`` in ``image`` scored against ``benchmark``."""
    from .image import region_mean

    return color_metrics(region_mean(image, region), benchmark, label=region.label,
                         white_for_lab=white_for_lab)
