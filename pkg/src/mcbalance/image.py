"""Image buffers, PNG/PPM I/O, region sampling and whole-image correction."""

import enum
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import png

from . import _kernels
from .colorspace import SRGB_TO_XYZ, XYZ_TO_SRGB, ColorXYZ
from .errors import (ColorSpaceMismatch, CorruptImage, DomainError, UnreadableImage,
                     UnsupportedFormat)

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


class ColorSpace(enum.Enum):
    ENCODED_SRGB = "encoded-srgb"
    LINEAR_RGB = "linear-rgb"
    XYZ = "xyz"


@dataclass
class ImageBuffer:
    """``height x width x 3`` float pixels tagged with their color space."""

    pixels: np.ndarray
    space: ColorSpace

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise DomainError(f"pixels must have shape (height, width, 3), got {px.shape}")
        if px.shape[0] == 0 or px.shape[1] == 0:
            raise DomainError("image must contain at least one pixel")
        if px.dtype not in (np.float32, np.float64):
            px = px.astype(np.float64)
        self.pixels = np.ascontiguousarray(px)
        self.space = ColorSpace(self.space)

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]

    def flat(self):
        return self.pixels.reshape(-1, 3)

    def require(self, space):
        if self.space is not space:
            raise ColorSpaceMismatch(f"expected a {space.value} buffer, got {self.space.value}")


@dataclass(frozen=True)
class Region:
    """Axis-aligned pixel rectangle ``[x0, x0 + w) x [y0, y0 + h)``."""

    x0: int
    y0: int
    w: int
    h: int
    label: str = ""

    def __post_init__(self):
        for name in ("x0", "y0", "w", "h"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise DomainError(f"region {name} must be an integer, got {v!r}")
        if self.x0 < 0 or self.y0 < 0:
            raise DomainError(f"region {self.label!r} has a negative origin")
        if self.w <= 0 or self.h <= 0:
            raise DomainError(f"region {self.label!r} is empty")

    @property
    def slices(self):
        return slice(self.y0, self.y0 + self.h), slice(self.x0, self.x0 + self.w)

    def fits(self, width, height):
        return self.x0 + self.w <= width and self.y0 + self.h <= height

    def overlaps(self, other):
        return (self.x0 < other.x0 + other.w and other.x0 < self.x0 + self.w
                and self.y0 < other.y0 + other.h and other.y0 < self.y0 + self.h)


# -- file I/O -----------------------------------------------------------------

def _read_ppm(data):
    pos = 2
    fields = []
    n = len(data)
    while len(fields) < 3:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and data[pos:pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise CorruptImage("PPM header is truncated or malformed")
        fields.append(int(data[start:pos]))
    if pos >= n or not data[pos:pos + 1].isspace():
        raise CorruptImage("PPM header is truncated or malformed")
    pos += 1
    width, height, maxval = fields
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise CorruptImage(f"invalid PPM header values {width}x{height}, maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height * 3
    payload = data[pos:pos + count * dtype.itemsize]
    if len(payload) < count * dtype.itemsize:
        raise CorruptImage("PPM pixel data is truncated")
    raw = np.frombuffer(payload, dtype=dtype).reshape(height, width, 3)
    return raw, maxval


def _read_png(data):
    try:
        width, height, rows, info = png.Reader(bytes=data).asDirect()
        planes = info["planes"]
        maxval = 2 ** info["bitdepth"] - 1
        raw = np.vstack([np.asarray(r, dtype=np.uint16) for r in rows])
    except (png.Error, zlib.error, EOFError, ValueError) as exc:
        raise CorruptImage(f"corrupt PNG: {exc}") from exc
    raw = raw.reshape(height, width, planes)
    if planes in (1, 2):
        raw = np.repeat(raw[:, :, :1], 3, axis=2)
    else:
        raw = raw[:, :, :3]
    return raw, maxval


def load_image(path):
    """Read an 8/16-bit PNG or binary PPM (P6) into an encoded-sRGB buffer."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UnreadableImage(f"cannot read {path}: {exc}") from exc
    if data.startswith(PNG_SIGNATURE):
        raw, maxval = _read_png(data)
    elif data[:2] == b"P6":
        raw, maxval = _read_ppm(data)
    elif len(data) < 8 and PNG_SIGNATURE.startswith(data) and data:
        raise CorruptImage(f"{path} is truncated")
    else:
        raise UnsupportedFormat(f"{path} is neither PNG nor binary PPM (P6)")
    return ImageBuffer(raw.astype(np.float64) / maxval, ColorSpace.ENCODED_SRGB)


def quantize(pixels, bit_depth):
    maxval = (1 << bit_depth) - 1
    dtype = np.uint16 if bit_depth > 8 else np.uint8
    return np.rint(np.clip(pixels, 0.0, 1.0) * maxval).astype(dtype)


def save_image(buffer, path, bit_depth=16):
    """Write an encoded-sRGB buffer as PNG (``.png``) or binary PPM (``.ppm``/``.pnm``)."""
    buffer.require(ColorSpace.ENCODED_SRGB)
    if bit_depth not in (8, 16):
        raise DomainError(f"bit depth must be 8 or 16, got {bit_depth}")
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in (".png", ".ppm", ".pnm"):
        raise UnsupportedFormat(f"cannot infer output format from {path.name!r}")
    q = quantize(buffer.pixels, bit_depth)
    try:
        with open(path, "wb") as fh:
            if suffix == ".png":
                writer = png.Writer(buffer.width, buffer.height, greyscale=False,
                                    bitdepth=bit_depth)
                writer.write_array(fh, q.reshape(-1))
            else:
                fh.write(f"P6\n{buffer.width} {buffer.height}\n{(1 << bit_depth) - 1}\n".encode())
                fh.write(q.astype(">u2").tobytes() if bit_depth == 16 else q.tobytes())
    except OSError as exc:
        raise UnreadableImage(f"cannot write {path}: {exc}") from exc


# -- color-space transforms -----------------------------------------------------

def _run(kernel, buffer, m, workers, dtype=np.float64):
    out = np.empty(buffer.pixels.shape, dtype=dtype)
    _kernels.run(kernel, buffer.flat(), m, out.reshape(-1, 3),
                 row_length=buffer.width, workers=workers)
    return out


def to_xyz(buffer, workers=None):
    """Encoded sRGB (or linear RGB) buffer to an XYZ buffer."""
    if buffer.space is ColorSpace.XYZ:
        raise ColorSpaceMismatch("buffer is already in XYZ")
    if buffer.space is ColorSpace.LINEAR_RGB:
        return ImageBuffer(_run("apply_matrix", buffer, SRGB_TO_XYZ, workers), ColorSpace.XYZ)
    px = buffer.pixels
    if not (np.all(np.isfinite(px)) and px.min() >= 0.0 and px.max() <= 1.0):
        raise DomainError("encoded sRGB channels must lie in [0, 1]")
    return ImageBuffer(_run("decode_then_matrix", buffer, SRGB_TO_XYZ, workers), ColorSpace.XYZ)


def from_xyz(buffer, workers=None):
    """XYZ buffer to encoded sRGB; out-of-gamut values are clamped at encode."""
    buffer.require(ColorSpace.XYZ)
    return ImageBuffer(_run("matrix_then_encode", buffer, XYZ_TO_SRGB, workers),
                       ColorSpace.ENCODED_SRGB)


def region_mean(buffer, region):
    """Arithmetic mean XYZ over ``region``.

    Accumulates offsets from the first pixel, so a constant region returns
    its color exactly.
    """
    buffer.require(ColorSpace.XYZ)
    if not region.fits(buffer.width, buffer.height):
        raise DomainError(
            f"region {region.label!r} ({region.x0},{region.y0},{region.w}x{region.h}) "
            f"exceeds image {buffer.width}x{buffer.height}"
        )
    patch = buffer.pixels[region.slices].reshape(-1, 3).astype(np.float64)
    ref = patch[0]
    return ColorXYZ(*(ref + (patch - ref).mean(axis=0)).tolist())


def apply_correction(buffer, m, workers=None):
    """Replace every XYZ pixel ``p`` by ``m @ p``.

    The input dtype (float32 or float64) is kept; arithmetic is float64.
    Rows are split into one band per worker and the result does not depend
    on ``workers``.
    """
    buffer.require(ColorSpace.XYZ)
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise DomainError("correction must be a finite 3x3 matrix")
    return ImageBuffer(_run("apply_matrix", buffer, m, workers, dtype=buffer.pixels.dtype),
                       ColorSpace.XYZ)
