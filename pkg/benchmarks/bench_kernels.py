"""Time the per-pixel kernels on both backends and several worker counts.

    python benchmarks/bench_kernels.py [--megapixels 12] [--repeat 5]
"""

import argparse
import os
import time

import numpy as np

from mcbalance import _kernels
from mcbalance.colorspace import SRGB_TO_XYZ, XYZ_TO_SRGB


def best_of(fn, repeat):
    fn()  # warm up
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--megapixels", type=float, default=12.0)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--workers", type=int, nargs="+",
                        default=sorted({1, 2, _kernels.default_workers()}))
    args = parser.parse_args()

    width = 4000
    height = int(round(args.megapixels * 1e6 / width))
    rng = np.random.default_rng(0)
    src = rng.uniform(size=(height * width, 3))
    out = np.empty_like(src)
    m = np.array([[0.94, 0.12, -0.05], [-0.03, 1.02, 0.01], [0.02, -0.04, 1.31]])
    cases = [("apply_matrix", m), ("decode_then_matrix", SRGB_TO_XYZ),
             ("matrix_then_encode", XYZ_TO_SRGB)]
    backends = [b for b in ("numba", "numpy") if b in _kernels.BACKENDS]

    print(f"{height}x{width} float64, {os.cpu_count()} CPU(s), best of {args.repeat}")
    print(f"{'kernel':<20} {'backend':<7} {'workers':>7} {'ms':>9} {'Mpx/s':>8}")
    reference = {}
    for kernel, mat in cases:
        for backend in backends:
            for workers in args.workers:
                def call():
                    _kernels.run(kernel, src, mat, out, row_length=width, workers=workers,
                                 backend=backend)
                t = best_of(call, args.repeat)
                key = (kernel, backend)
                same = reference.setdefault(key, out.copy())
                flag = "" if np.array_equal(same, out) else "  (differs from 1 worker!)"
                print(f"{kernel:<20} {backend:<7} {workers:>7} {t * 1e3:9.1f} "
                      f"{height * width / t / 1e6:8.1f}{flag}")
        if len(backends) == 2:
            diff = np.abs(reference[(kernel, "numba")] - reference[(kernel, "numpy")]).max()
            print(f"{kernel:<20} max |numba - numpy| = {diff:.2e}")


if __name__ == "__main__":
    main()
