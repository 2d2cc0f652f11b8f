"""Pure-Python/numpy implementations of the hot kernels.

These are the reference behaviour; ``_ckernels`` must produce identical
output (bit-for-bit on floats) for the same inputs.
"""
import numpy as np

BACKEND = "python"


def convolve2d(img, kernel):
    """Replicate-border correlation of ``img`` with an odd square ``kernel``."""
    img = np.ascontiguousarray(img, dtype=np.float64)
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    k = kernel.shape[0]
    s = k // 2
    h, w = img.shape
    padded = np.pad(img, s, mode="edge")
    out = np.zeros((h, w), dtype=np.float64)
    # Taps accumulate in row-major kernel order; zero taps are skipped.
    for i in range(k):
        for j in range(k):
            wt = kernel[i, j]
            if wt != 0.0:
                out += wt * padded[i:i + h, j:j + w]
    return out


def run_extents(bits, reach):
    """Count set pixels immediately left/right of each set pixel, capped at ``reach``.

    Both counts are 0 where the pixel itself is clear.
    """
    bits = np.asarray(bits, dtype=bool)
    left = np.zeros(bits.shape, dtype=np.int32)
    right = np.zeros(bits.shape, dtype=np.int32)
    alive_l = bits.copy()
    alive_r = bits.copy()
    for k in range(1, reach + 1):
        alive_l[:, k:] &= bits[:, :-k]
        alive_l[:, :k] = False
        alive_r[:, :-k] &= bits[:, k:]
        alive_r[:, -k:] = False
        if not (alive_l.any() or alive_r.any()):
            break
        left += alive_l
        right += alive_r
    return left, right


def trace_chains(bits, seeds, width, maximal, min_len, max_len, r0, r1, c0, c1):
    """Trace downward chains through ``bits`` from ``seeds`` pixels in ``[r0,r1) x [c0,c1)``.

    Each step moves one row down to the same column, else one right, else
    one left. ``maximal`` skips seeds with another seed in the three cells
    above. ``width`` is summed along each chain.

    Returns ``(rows, cols, lengths, width_sums, truncated, offsets, path)``
    where chain ``i`` visits columns ``path[offsets[i]:offsets[i+1]]`` on
    consecutive rows starting at ``rows[i]``.
    """
    bits = np.asarray(bits, dtype=bool)
    seeds = np.asarray(seeds, dtype=bool)
    h, w = bits.shape
    grid = bits.tolist()
    sgrid = seeds.tolist()
    wgrid = np.asarray(width).tolist()
    rows, cols, lengths, wsums, trunc = [], [], [], [], []
    offsets = [0]
    path = []

    rr, cc = np.nonzero(seeds[r0:r1, c0:c1])
    for r, c in zip((rr + r0).tolist(), (cc + c0).tolist()):
        if maximal and r > 0:
            above = sgrid[r - 1]
            if above[c] or (c > 0 and above[c - 1]) or (c + 1 < w and above[c + 1]):
                continue
        chain = [c]
        wsum = wgrid[r][c]
        cur_r, cur_c = r, c
        truncated = False
        while True:
            nr = cur_r + 1
            if nr >= h:
                break
            nxt = grid[nr]
            step = -1
            for cand in (cur_c, cur_c + 1, cur_c - 1):
                if 0 <= cand < w and nxt[cand]:
                    step = cand
                    break
            if step < 0:
                break
            if max_len and len(chain) >= max_len:
                truncated = True
                break
            cur_r, cur_c = nr, step
            chain.append(step)
            wsum += wgrid[nr][step]
        if len(chain) < min_len:
            continue
        rows.append(r)
        cols.append(c)
        lengths.append(len(chain))
        wsums.append(wsum)
        trunc.append(truncated)
        path.extend(chain)
        offsets.append(len(path))

    return (
        np.array(rows, dtype=np.int64),
        np.array(cols, dtype=np.int64),
        np.array(lengths, dtype=np.int64),
        np.array(wsums, dtype=np.int64),
        np.array(trunc, dtype=bool),
        np.array(offsets, dtype=np.int64),
        np.array(path, dtype=np.int64),
    )
