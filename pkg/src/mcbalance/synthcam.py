"""Synthetic patch scenes rendered under controllable illuminant casts.

A cast is a diagonal gain in the cone basis of an adaptation model, i.e. the
inverse family of a white-balance correction.  Rendering under a cast whose
model differs from the one used to correct it reproduces the situation where
white balancing fixes white but leaves chromatic colors off.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .balance import apply_matrix
from .colorspace import D65, AdaptationModel, ColorXYZ
from .errors import ConfigError
from .image import ColorSpace, ImageBuffer, Region

# Classic 24-patch color rendition chart, row-major from "dark skin" to
# "black".  XYZ (D65, Y=1) derived from the BabelColor 8-bit sRGB values
# through the sRGB transfer function and the four-decimal sRGB matrix.
CHART_PATCHES = (
    ("dark_skin", (0.111309, 0.100968, 0.068311)),
    ("light_skin", (0.371837, 0.348937, 0.258945)),
    ("blue_sky", (0.180823, 0.189501, 0.346030)),
    ("foliage", (0.103062, 0.131566, 0.073065)),
    ("blue_flower", (0.253278, 0.235992, 0.448152)),
    ("bluish_green", (0.310468, 0.421810, 0.445356)),
    ("orange", (0.356470, 0.293997, 0.061788)),
    ("purplish_blue", (0.139323, 0.119408, 0.376469)),
    ("moderate_red", (0.279006, 0.195506, 0.141075)),
    ("purple", (0.089387, 0.066941, 0.150083)),
    ("yellow_green", (0.328133, 0.435047, 0.115183)),
    ("orange_yellow", (0.443308, 0.422389, 0.084012)),
    ("blue", (0.088047, 0.063802, 0.296216)),
    ("green", (0.143183, 0.229629, 0.099810)),
    ("red", (0.198140, 0.120785, 0.055620)),
    ("yellow", (0.536257, 0.579347, 0.096525)),
    ("magenta", (0.292461, 0.193903, 0.306350)),
    ("cyan", (0.149207, 0.193999, 0.366764)),
    ("white", (0.850398, 0.895667, 0.968104)),
    ("neutral_8", (0.548990, 0.577580, 0.628985)),
    ("neutral_6_5", (0.334132, 0.351533, 0.382819)),
    ("neutral_5", (0.184368, 0.194371, 0.208692)),
    ("neutral_3_5", (0.086345, 0.090842, 0.098927)),
    ("black", (0.032640, 0.034340, 0.037396)),
)
CHART_SRGB8 = (
    (115, 82, 68), (194, 150, 130), (98, 122, 157), (87, 108, 67), (133, 128, 177),
    (103, 189, 170), (214, 126, 44), (80, 91, 166), (193, 90, 99), (94, 60, 108),
    (157, 188, 64), (224, 163, 46), (56, 61, 150), (70, 148, 73), (175, 54, 60),
    (231, 199, 31), (187, 86, 149), (8, 133, 161), (243, 243, 242), (200, 200, 200),
    (160, 160, 160), (122, 122, 121), (85, 85, 85), (52, 52, 52),
)
CHART_COLORS = {name: ColorXYZ(*xyz) for name, xyz in CHART_PATCHES}

DEFAULT_BACKGROUND = ColorXYZ(0.1 * D65.x, 0.1 * D65.y, 0.1 * D65.z)


@dataclass(frozen=True)
class Patch:
    region: Region
    color: ColorXYZ


@dataclass
class PatchScene:
    width: int
    height: int
    patches: List[Patch]
    background: ColorXYZ = DEFAULT_BACKGROUND

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.width <= 0 or self.height <= 0:
            raise ConfigError(f"canvas must be non-empty, got {self.width}x{self.height}")
        labels = set()
        for i, p in enumerate(self.patches):
            r = p.region
            if not r.fits(self.width, self.height):
                raise ConfigError(f"patch {r.label!r} lies outside the {self.width}x{self.height} canvas")
            if r.label in labels:
                raise ConfigError(f"duplicate patch name {r.label!r}")
            labels.add(r.label)
            if not np.all(np.isfinite(p.color)):
                raise ConfigError(f"patch {r.label!r} has a non-finite color")
            for q in self.patches[:i]:
                if r.overlaps(q.region):
                    raise ConfigError(f"patches {q.region.label!r} and {r.label!r} overlap")

    def patch(self, label):
        for p in self.patches:
            if p.region.label == label:
                return p
        raise KeyError(label)


@dataclass(frozen=True)
class IlluminantCast:
    """Diagonal ``gains`` applied in the cone basis of ``model``."""

    model: AdaptationModel = AdaptationModel.BRADFORD
    gains: Tuple[float, float, float] = field(default=(1.0, 1.0, 1.0))

    def __post_init__(self):
        object.__setattr__(self, "model", AdaptationModel.parse(self.model))
        g = tuple(float(v) for v in self.gains)
        if len(g) != 3 or not all(np.isfinite(v) and v > 0.0 for v in g):
            raise ConfigError(f"cast gains must be three positive reals, got {self.gains!r}")
        object.__setattr__(self, "gains", g)

    @property
    def matrix(self):
        if self.gains == (1.0, 1.0, 1.0):
            return np.eye(3)
        return self.model.basis_inverse @ np.diag(self.gains) @ self.model.basis

    def apply(self, color):
        return ColorXYZ(*apply_matrix(self.matrix, color).tolist())


def chart_scene(patch_size=32, gap=8, margin=16, copies=1, background=DEFAULT_BACKGROUND):
    """The 24-patch chart as a 4x6 grid, stacked ``copies`` times vertically.

    The first copy uses the plain patch names; copy ``k >= 2`` appends ``_k``
    (e.g. ``red_2``), giving same-color patches that take no part in a fit.
    """
    if copies < 1:
        raise ConfigError("copies must be >= 1")
    pitch = patch_size + gap
    grid_h = 4 * pitch - gap
    width = 2 * margin + 6 * pitch - gap
    height = 2 * margin + copies * grid_h + (copies - 1) * 2 * gap
    patches = []
    for k in range(copies):
        top = margin + k * (grid_h + 2 * gap)
        suffix = "" if k == 0 else f"_{k + 1}"
        for idx, (name, xyz) in enumerate(CHART_PATCHES):
            row, col = divmod(idx, 6)
            region = Region(margin + col * pitch, top + row * pitch, patch_size, patch_size,
                            name + suffix)
            patches.append(Patch(region, ColorXYZ(*xyz)))
    return PatchScene(width, height, patches, ColorXYZ(*background))


def render(scene, cast=None, noise_sigma=0.0, seed=0, dtype=np.float64):
    """Render ``scene`` under ``cast`` to an XYZ buffer.

    Each patch is filled with its cast color; with ``noise_sigma > 0`` every
    pixel gets i.i.d. Gaussian noise from ``seed`` and is then truncated at 0.
    """
    cast = cast or IlluminantCast()
    if noise_sigma < 0:
        raise ConfigError("noise_sigma must be >= 0")
    scene.validate()
    m = cast.matrix
    img = np.empty((scene.height, scene.width, 3), dtype=np.float64)
    img[...] = apply_matrix(m, scene.background)
    for p in scene.patches:
        img[p.region.slices] = apply_matrix(m, p.color)
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        img += rng.normal(0.0, noise_sigma, size=img.shape)
        np.maximum(img, 0.0, out=img)
    return ImageBuffer(img.astype(dtype, copy=False), ColorSpace.XYZ)
