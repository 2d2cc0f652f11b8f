# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_pykernels``.

Outputs must match the pure-Python reference exactly, so the accumulation
order in ``convolve2d`` mirrors it tap by tap.
"""
import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector

cnp.import_array()

BACKEND = "cython"


def convolve2d(img, kernel):
    cdef const double[:, ::1] src = np.ascontiguousarray(img, dtype=np.float64)
    cdef const double[:, ::1] ker = np.ascontiguousarray(kernel, dtype=np.float64)
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1]
    cdef Py_ssize_t k = ker.shape[0], s = k // 2
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    # Nonzero taps, in row-major kernel order.
    cdef vector[Py_ssize_t] di, dj
    cdef vector[double] wt
    cdef Py_ssize_t i, j, r, c, t, rr, cc, ntaps
    for i in range(k):
        for j in range(k):
            if ker[i, j] != 0.0:
                di.push_back(i - s)
                dj.push_back(j - s)
                wt.push_back(ker[i, j])
    ntaps = wt.size()

    cdef double acc
    with nogil:
        for r in range(h):
            for c in range(w):
                acc = 0.0
                for t in range(ntaps):
                    rr = r + di[t]
                    if rr < 0:
                        rr = 0
                    elif rr >= h:
                        rr = h - 1
                    cc = c + dj[t]
                    if cc < 0:
                        cc = 0
                    elif cc >= w:
                        cc = w - 1
                    acc = acc + wt[t] * src[rr, cc]
                out[r, c] = acc
    return out_arr


def run_extents(bits, Py_ssize_t reach):
    cdef const unsigned char[:, ::1] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef Py_ssize_t h = b.shape[0], w = b.shape[1]
    left_arr = np.zeros((h, w), dtype=np.int32)
    right_arr = np.zeros((h, w), dtype=np.int32)
    cdef int[:, ::1] left = left_arr
    cdef int[:, ::1] right = right_arr
    cdef Py_ssize_t r, c, run
    with nogil:
        for r in range(h):
            run = 0
            for c in range(w):
                if b[r, c]:
                    left[r, c] = run if run < reach else reach
                    run += 1
                else:
                    run = 0
            run = 0
            for c in range(w - 1, -1, -1):
                if b[r, c]:
                    right[r, c] = run if run < reach else reach
                    run += 1
                else:
                    run = 0
    return left_arr, right_arr


def trace_chains(bits, seeds, width, bint maximal, Py_ssize_t min_len, Py_ssize_t max_len,
                 Py_ssize_t r0, Py_ssize_t r1, Py_ssize_t c0, Py_ssize_t c1):
    cdef const unsigned char[:, ::1] b = np.ascontiguousarray(bits, dtype=np.uint8)
    cdef const unsigned char[:, ::1] sd = np.ascontiguousarray(seeds, dtype=np.uint8)
    cdef const int[:, ::1] wd = np.ascontiguousarray(width, dtype=np.int32)
    cdef Py_ssize_t h = b.shape[0], w = b.shape[1]
    cdef vector[long long] rows, cols, lengths, wsums, offsets, path
    cdef vector[unsigned char] trunc
    cdef Py_ssize_t r, c, nr, cur_c, cand, step, k, n, mark
    cdef long long wsum
    cdef bint truncated
    offsets.push_back(0)

    with nogil:
        for r in range(r0, r1):
            for c in range(c0, c1):
                if not sd[r, c]:
                    continue
                if maximal and r > 0:
                    if sd[r - 1, c] or (c > 0 and sd[r - 1, c - 1]) or (c + 1 < w and sd[r - 1, c + 1]):
                        continue
                mark = path.size()
                path.push_back(c)
                wsum = wd[r, c]
                n = 1
                cur_c = c
                nr = r
                truncated = False
                while True:
                    nr = nr + 1
                    if nr >= h:
                        break
                    step = -1
                    for k in range(3):
                        if k == 0:
                            cand = cur_c
                        elif k == 1:
                            cand = cur_c + 1
                        else:
                            cand = cur_c - 1
                        if cand >= 0 and cand < w and b[nr, cand]:
                            step = cand
                            break
                    if step < 0:
                        break
                    if max_len > 0 and n >= max_len:
                        truncated = True
                        break
                    cur_c = step
                    path.push_back(step)
                    n += 1
                    wsum += wd[nr, step]
                if n < min_len:
                    path.resize(mark)
                    continue
                rows.push_back(r)
                cols.push_back(c)
                lengths.push_back(n)
                wsums.push_back(wsum)
                trunc.push_back(truncated)
                offsets.push_back(path.size())

    return (
        np.array(rows, dtype=np.int64),
        np.array(cols, dtype=np.int64),
        np.array(lengths, dtype=np.int64),
        np.array(wsums, dtype=np.int64),
        np.array(trunc, dtype=bool),
        np.array(offsets, dtype=np.int64),
        np.array(path, dtype=np.int64),
    )
