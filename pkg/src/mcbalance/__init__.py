"""Multi-color balance: exact three-color correction of XYZ images.

A 3x3 matrix ``D @ inv(S)`` maps three measured target colors (columns of
``S``) onto three benchmark colors (columns of ``D``).  Classic white balance
through a chromatic-adaptation basis is provided as the baseline, together
with reproduction angular error and CIEDE2000 metrics.
"""

from .balance import (apply_matrix, cone_response, multi_color_balance_matrix,
                      white_balance_matrix)
from .colorspace import D65, AdaptationModel, ColorLab, ColorXYZ, xyz_to_lab
from .errors import (ColinearTargetColors, ConfigError, DegenerateWhitePoint, DomainError,
                     McBalanceError)
from .image import (ColorSpace, ImageBuffer, Region, apply_correction, from_xyz, load_image,
                    region_mean, save_image, to_xyz)
from .metrics import (MetricReport, ciede2000_delta_e, ciede2000_delta_h, evaluate_region,
                      reproduction_angular_error)
from .synthcam import IlluminantCast, Patch, PatchScene, chart_scene, render

__version__ = "0.1.0"

__all__ = [
    "AdaptationModel", "ColinearTargetColors", "ColorLab", "ColorSpace", "ColorXYZ",
    "ConfigError", "D65", "DegenerateWhitePoint", "DomainError", "IlluminantCast",
    "ImageBuffer", "McBalanceError", "MetricReport", "Patch", "PatchScene", "Region",
    "apply_correction", "apply_matrix",
    "ciede2000_delta_e", "ciede2000_delta_h", "chart_scene", "cone_response",
    "evaluate_region", "from_xyz", "load_image", "multi_color_balance_matrix", "region_mean",
    "render", "reproduction_angular_error", "save_image", "to_xyz", "white_balance_matrix",
    "xyz_to_lab",
]
