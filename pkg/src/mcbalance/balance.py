"""White-balance and multi-color balance correction matrices.

Both corrections are a single 3x3 matrix acting on XYZ pixels:

* white balance maps one source white onto a destination white through
  diagonal gains in a chromatic-adaptation basis ``M_A``;
* multi-color balance maps three source colors onto three benchmark colors
  exactly, ``M = D @ inv(S)`` with the colors stacked as matrix columns.
"""

import warnings
from typing import NamedTuple

import numpy as np

from .colorspace import AdaptationModel
from .errors import ColinearTargetColors, DegenerateWhitePoint, DomainError

DEFAULT_COND_THRESHOLD = 1e8
CONE_EPS = 1e-12


class RankDeficientBenchmarks(UserWarning):
    """The benchmark matrix is singular; the correction collapses a direction."""


class ConeResponse(NamedTuple):
    rho: float
    gamma: float
    beta: float


# -- closed-form 3x3 linear algebra -----------------------------------------

def det3(m):
    m = np.asarray(m, dtype=np.float64)
    return float(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def adjugate3(m):
    m = np.asarray(m, dtype=np.float64)
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    return np.array([
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ])


def inv3(m):
    """Inverse of a 3x3 matrix via adjugate / determinant.

    Raises ZeroDivisionError for an exactly singular matrix.
    """
    det = det3(m)
    if det == 0.0:
        raise ZeroDivisionError("singular 3x3 matrix")
    return adjugate3(m) / det


def norm1(m):
    """Induced 1-norm: maximum absolute column sum."""
    return float(np.abs(np.asarray(m, dtype=np.float64)).sum(axis=0).max())


def cond1(m):
    """1-norm condition number; ``inf`` for singular or non-finite input."""
    m = np.asarray(m, dtype=np.float64)
    if not np.all(np.isfinite(m)) or det3(m) == 0.0:
        return float("inf")
    return norm1(m) * norm1(inv3(m))


def color_matrix(colors):
    """Stack three colors as the columns of a 3x3 matrix."""
    cols = np.asarray(colors, dtype=np.float64)
    if cols.shape != (3, 3):
        raise DomainError(f"expected exactly three XYZ colors, got shape {cols.shape}")
    if not np.all(np.isfinite(cols)):
        raise DomainError("color components must be finite")
    return cols.T.copy()


# -- white balance ------------------------------------------------------------

def cone_response(white, model=AdaptationModel.BRADFORD):
    """Coordinates of ``white`` in the cone basis of ``model``.

    A white with a (near) zero tristimulus component is degenerate under every
    model, even where the basis would mix it into a nonzero cone response.
    """
    model = AdaptationModel.parse(model)
    w = np.asarray(white, dtype=np.float64)
    if w.shape != (3,) or not np.all(np.isfinite(w)):
        raise DomainError(f"white point must be a finite XYZ triple, got {white!r}")
    if np.any(np.abs(w) < CONE_EPS):
        raise DegenerateWhitePoint(f"white point {tuple(w)} has a zero component")
    rgb = model.basis @ w
    if np.any(np.abs(rgb) < CONE_EPS):
        raise DegenerateWhitePoint(
            f"white point {tuple(w)} has a zero cone response under {model.value}: {tuple(rgb)}"
        )
    return ConeResponse(*rgb.tolist())


def white_balance_matrix(source_white, dest_white, model=AdaptationModel.BRADFORD):
    """Adaptation matrix ``inv(M_A) @ diag(dest / source) @ M_A``."""
    model = AdaptationModel.parse(model)
    src = np.array(cone_response(source_white, model))
    dst = np.array(cone_response(dest_white, model))
    gains = np.diag(dst / src)
    return model.basis_inverse @ gains @ model.basis


# -- multi-color balance ------------------------------------------------------

def multi_color_balance_matrix(sources, dests, cond_threshold=DEFAULT_COND_THRESHOLD,
                               labels=None):
    """Matrix mapping each of three source colors exactly onto its destination.

    ``sources`` and ``dests`` are sequences of three XYZ colors.  Raises
    :class:`ColinearTargetColors` when the source matrix is singular or its
    1-norm condition number reaches ``cond_threshold``.  A singular benchmark
    matrix only triggers :class:`RankDeficientBenchmarks`.
    """
    s = color_matrix(sources)
    d = color_matrix(dests)
    cond = cond1(s)
    if not cond < cond_threshold:
        names = f" ({', '.join(labels)})" if labels else ""
        raise ColinearTargetColors(
            f"target colors{names} are linearly dependent: "
            f"condition number {cond:.3g} >= {cond_threshold:.3g}",
            condition=cond,
            labels=labels,
        )
    if not cond1(d) < cond_threshold:
        warnings.warn("benchmark colors are linearly dependent; the correction is singular",
                      RankDeficientBenchmarks, stacklevel=2)
    return d @ inv3(s)


def apply_matrix(m, p):
    """``m @ p`` for a single color or each color of an ``(..., 3)`` array.

    No clamping: results may leave the non-negative octant.
    """
    return np.asarray(p, dtype=np.float64) @ np.asarray(m, dtype=np.float64).T
