"""Compare the compiled and pure-Python kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--size 1024] [--repeat 3]

Each kernel runs on the same rendered edge image with both backends; the
best of ``--repeat`` wall times is reported, and outputs are checked equal.
"""
import argparse
import math
import time

import numpy as np

from mtfedge import _pykernels
from mtfedge.detect import LOG_5X5, auto_threshold
from mtfedge.segment import skeleton
from mtfedge.synth import EdgeTarget, render

try:
    from mtfedge import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_of(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return a.tobytes() == b.tobytes()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        ap.exit(1, "compiled extension not built; run `pip install -e . --no-build-isolation`\n")

    n = args.size
    img = render(EdgeTarget(n, n, math.radians(84.0), 0.0, 20.0, 220.0, 0.8,
                            noise_sigma=2.0, seed=1)).pixels
    resp = _ckernels.convolve2d(img, LOG_5X5)
    bits = np.abs(resp) >= auto_threshold(resp)
    u8 = bits.view(np.uint8)
    seeds, width = skeleton(bits)
    s8 = seeds.view(np.uint8)

    cases = [
        ("convolve2d (5x5 LoG)", lambda k: lambda: k.convolve2d(img, LOG_5X5)),
        ("run_extents", lambda k: lambda: k.run_extents(u8, 16)),
        ("trace_chains", lambda k: lambda: k.trace_chains(u8, s8, width, True, 6, 256, 0, n, 0, n)),
    ]
    print(f"{n}x{n} image, {int(bits.sum())} edge pixels, best of {args.repeat}")
    print(f"{'kernel':<24}{'python s':>11}{'cython s':>11}{'speedup':>9}  equal")
    for name, make in cases:
        tp, op = best_of(make(_pykernels), args.repeat)
        tc, oc = best_of(make(_ckernels), args.repeat)
        print(f"{name:<24}{tp:>11.4f}{tc:>11.4f}{tp / tc:>8.1f}x  {same(op, oc)}")


if __name__ == "__main__":
    main()
