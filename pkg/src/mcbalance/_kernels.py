"""Per-pixel kernels with a numba path and a pure-numpy fallback.

Every kernel works on a flat ``(n, 3)`` pixel array and writes into a
preallocated output of the same shape.  Arithmetic is spelled out channel by
channel in both backends (no BLAS), so each output pixel depends only on its
input pixel and the result is bit-identical whatever the band partition.

Set ``MCBALANCE_DISABLE_NUMBA=1`` before import to force the numpy path.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

ENV_FLAG = "MCBALANCE_DISABLE_NUMBA"

SRGB_DECODE_THRESHOLD = 0.04045
SRGB_ENCODE_THRESHOLD = 0.0031308

# pixels per numpy chunk; bounds temporaries to a few MB
_NP_CHUNK = 1 << 16


def _flag_set(value):
    return value.strip().lower() not in ("", "0", "false", "no", "off")


def numba_requested():
    return not _flag_set(os.environ.get(ENV_FLAG, ""))


try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and numba_requested()


# --------------------------------------------------------------------------
# numpy backend
# --------------------------------------------------------------------------

def _np_chunks(n):
    for start in range(0, n, _NP_CHUNK):
        yield slice(start, min(start + _NP_CHUNK, n))


def _np_mat_rows(src, m, out):
    x = src[:, 0]
    y = src[:, 1]
    z = src[:, 2]
    out[:, 0] = m[0, 0] * x + m[0, 1] * y + m[0, 2] * z
    out[:, 1] = m[1, 0] * x + m[1, 1] * y + m[1, 2] * z
    out[:, 2] = m[2, 0] * x + m[2, 1] * y + m[2, 2] * z


def _np_decode(c):
    c = np.asarray(c, dtype=np.float64)
    return np.where(
        c <= SRGB_DECODE_THRESHOLD,
        c / 12.92,
        ((np.maximum(c, SRGB_DECODE_THRESHOLD) + 0.055) / 1.055) ** 2.4,
    )


def _np_encode(v):
    v = np.clip(np.asarray(v, dtype=np.float64), 0.0, 1.0)
    p = np.maximum(v, SRGB_ENCODE_THRESHOLD) ** (1.0 / 2.4)
    return np.where(v <= SRGB_ENCODE_THRESHOLD, v * 12.92, p + 0.055 * (p - 1.0))


def np_apply_matrix(src, m, out):
    for s in _np_chunks(src.shape[0]):
        _np_mat_rows(src[s], m, out[s])


def np_decode_then_matrix(src, m, out):
    for s in _np_chunks(src.shape[0]):
        _np_mat_rows(_np_decode(src[s]), m, out[s])


def np_matrix_then_encode(src, m, out):
    for s in _np_chunks(src.shape[0]):
        lin = np.empty((s.stop - s.start, 3), dtype=np.float64)
        _np_mat_rows(src[s], m, lin)
        out[s] = _np_encode(lin)


# --------------------------------------------------------------------------
# numba backend
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(nogil=True, cache=True)
    def _nb_decode1(c):
        if c <= SRGB_DECODE_THRESHOLD:
            return c / 12.92
        return ((c + 0.055) / 1.055) ** 2.4

    @numba.njit(nogil=True, cache=True)
    def _nb_encode1(v):
        if v <= 0.0:
            v = 0.0
        elif v >= 1.0:
            v = 1.0
        if v <= SRGB_ENCODE_THRESHOLD:
            return v * 12.92
        p = v ** (1.0 / 2.4)
        return p + 0.055 * (p - 1.0)

    @numba.njit(nogil=True, cache=True)
    def nb_apply_matrix(src, m, out):
        m00, m01, m02 = m[0, 0], m[0, 1], m[0, 2]
        m10, m11, m12 = m[1, 0], m[1, 1], m[1, 2]
        m20, m21, m22 = m[2, 0], m[2, 1], m[2, 2]
        for i in range(src.shape[0]):
            x = np.float64(src[i, 0])
            y = np.float64(src[i, 1])
            z = np.float64(src[i, 2])
            out[i, 0] = m00 * x + m01 * y + m02 * z
            out[i, 1] = m10 * x + m11 * y + m12 * z
            out[i, 2] = m20 * x + m21 * y + m22 * z

    @numba.njit(nogil=True, cache=True)
    def nb_decode_then_matrix(src, m, out):
        m00, m01, m02 = m[0, 0], m[0, 1], m[0, 2]
        m10, m11, m12 = m[1, 0], m[1, 1], m[1, 2]
        m20, m21, m22 = m[2, 0], m[2, 1], m[2, 2]
        for i in range(src.shape[0]):
            r = _nb_decode1(np.float64(src[i, 0]))
            g = _nb_decode1(np.float64(src[i, 1]))
            b = _nb_decode1(np.float64(src[i, 2]))
            out[i, 0] = m00 * r + m01 * g + m02 * b
            out[i, 1] = m10 * r + m11 * g + m12 * b
            out[i, 2] = m20 * r + m21 * g + m22 * b

    @numba.njit(nogil=True, cache=True)
    def nb_matrix_then_encode(src, m, out):
        m00, m01, m02 = m[0, 0], m[0, 1], m[0, 2]
        m10, m11, m12 = m[1, 0], m[1, 1], m[1, 2]
        m20, m21, m22 = m[2, 0], m[2, 1], m[2, 2]
        for i in range(src.shape[0]):
            x = np.float64(src[i, 0])
            y = np.float64(src[i, 1])
            z = np.float64(src[i, 2])
            out[i, 0] = _nb_encode1(m00 * x + m01 * y + m02 * z)
            out[i, 1] = _nb_encode1(m10 * x + m11 * y + m12 * z)
            out[i, 2] = _nb_encode1(m20 * x + m21 * y + m22 * z)


BACKENDS = {
    "numpy": {
        "apply_matrix": np_apply_matrix,
        "decode_then_matrix": np_decode_then_matrix,
        "matrix_then_encode": np_matrix_then_encode,
    },
}
if HAVE_NUMBA:
    BACKENDS["numba"] = {
        "apply_matrix": nb_apply_matrix,
        "decode_then_matrix": nb_decode_then_matrix,
        "matrix_then_encode": nb_matrix_then_encode,
    }


def active_backend():
    return "numba" if USE_NUMBA else "numpy"


def default_workers():
    return os.cpu_count() or 1


def band_bounds(n_pixels, row_length, workers):
    """Split ``n_pixels`` into at most ``workers`` contiguous whole-row bands."""
    n_rows = n_pixels // row_length
    workers = max(1, min(workers, n_rows))
    edges = np.linspace(0, n_rows, workers + 1).round().astype(np.int64) * row_length
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def run(kernel, src, m, out, *, row_length=None, workers=None, backend=None):
    """Run a named kernel over ``src`` -> ``out`` (both ``(n, 3)``).

    Rows of ``row_length`` pixels are partitioned into one band per worker;
    bands are disjoint so no synchronization beyond the join is needed.
    """
    fn = BACKENDS[backend or active_backend()][kernel]
    m = np.ascontiguousarray(m, dtype=np.float64)
    n = src.shape[0]
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1 or n == 0:
        fn(src, m, out)
        return out
    bounds = band_bounds(n, row_length or 1, workers)
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        futures = [pool.submit(fn, src[a:b], m, out[a:b]) for a, b in bounds]
        for f in futures:
            f.result()
    return out
