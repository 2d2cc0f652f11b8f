"""The compiled and pure-Python backends must agree exactly."""
import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mtfedge import _kernels, _pykernels
from mtfedge.detect import LOG_5X5, SOBEL_X

ckernels = pytest.importorskip("mtfedge._ckernels")


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, st.tuples(st.integers(5, 24), st.integers(5, 24)),
           elements=st.floats(-1e6, 1e6)),
    st.sampled_from([LOG_5X5, SOBEL_X, SOBEL_X.T, np.ones((1, 1)), None]),
    st.integers(0, 2**32 - 1),
)
def test_convolution_bit_identical(img, kernel, seed):
    if kernel is None:
        kernel = np.random.default_rng(seed).normal(size=(5, 5))
    a = _pykernels.convolve2d(img, kernel)
    b = ckernels.convolve2d(img, kernel)
    assert a.tobytes() == b.tobytes()


@settings(max_examples=60, deadline=None)
@given(arrays(bool, st.tuples(st.integers(1, 30), st.integers(1, 40))), st.integers(1, 6))
def test_run_extents_identical(bits, reach):
    a = _pykernels.run_extents(bits, reach)
    b = ckernels.run_extents(bits.view(np.uint8), reach)
    for x, y in zip(a, b):
        assert x.dtype == y.dtype
        assert np.array_equal(x, y)
    left, right = a
    assert np.all(left[~bits] == 0) and np.all(right[~bits] == 0)
    assert left.max(initial=0) <= reach and right.max(initial=0) <= reach


def _inputs(bits, reach):
    left, right = _pykernels.run_extents(bits, reach)
    seeds = bits & (right - left >= 0) & (right - left <= 1)
    return seeds, left + right + 1


@settings(max_examples=60, deadline=None)
@given(
    arrays(bool, st.tuples(st.integers(1, 30), st.integers(1, 30))),
    st.booleans(),
    st.integers(1, 4),
    st.integers(0, 6),
    st.integers(1, 5),
)
def test_trace_identical(bits, maximal, min_len, max_len, reach):
    h, w = bits.shape
    seeds, width = _inputs(bits, reach)
    args = (width, maximal, min_len, max_len, 0, h, 0, w)
    a = _pykernels.trace_chains(bits, seeds, *args)
    b = ckernels.trace_chains(bits.view(np.uint8), seeds.view(np.uint8), *args)
    for x, y in zip(a, b):
        assert x.dtype == y.dtype
        assert np.array_equal(x, y)


def test_trace_window_identical():
    bits = np.random.default_rng(5).random((40, 50)) < 0.4
    seeds, width = _inputs(bits, 16)
    args = (width, True, 1, 10, 7, 31, 12, 44)
    for x, y in zip(_pykernels.trace_chains(bits, seeds, *args),
                    ckernels.trace_chains(bits.view(np.uint8), seeds.view(np.uint8), *args)):
        assert np.array_equal(x, y)


@pytest.mark.skipif(os.environ.get("MTFEDGE_PURE_PYTHON", "") not in ("", "0"),
                    reason="fallback forced by environment")
def test_compiled_backend_selected_by_default():
    assert _kernels.BACKEND == "cython"


def test_env_forces_fallback():
    env = dict(os.environ, MTFEDGE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import mtfedge; print(mtfedge.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
