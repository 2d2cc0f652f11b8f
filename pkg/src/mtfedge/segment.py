"""Edge segment tracing and ranking.

Segments are traced downward through a binary edge map, one row at a time,
allowing a drift of at most one column per row. Each segment is scored with

    R = (l - t) / 10 + |theta|

where ``l`` is the number of rows spanned, ``t`` the mean horizontal width
of the edge response along the segment and ``theta`` the edge angle from the
x-axis (``pi/2`` is vertical). Long, thin, vertical edges score highest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels

__all__ = [
    "EdgeSegment",
    "MAXIMAL_RUNS",
    "PER_PIXEL_RUNS",
    "RANK_DIVISOR",
    "RUN_REACH",
    "best_edge",
    "rank",
    "segment_theta",
    "skeleton",
    "sort_ranked",
    "trace_segments",
]

RANK_DIVISOR = 10.0
MAXIMAL_RUNS = "maximal-runs"
PER_PIXEL_RUNS = "per-pixel-runs"
SCAN_MODES = (MAXIMAL_RUNS, PER_PIXEL_RUNS)

# Horizontal run extents are measured at most this far either side of a
# pixel; bounds the context a tile needs (see batch.plan_tiles).
RUN_REACH = 16

_HALF_PI = math.pi / 2


def rank(l, t, theta, divisor: float = RANK_DIVISOR) -> float:
    """Edge rank ``(l - t) / divisor + |theta|``; ``theta`` in radians on ``[0, pi/2]``."""
    if not 0.0 <= theta <= _HALF_PI:
        raise ValueError(f"theta {theta!r} outside [0, pi/2]")
    return (l - t) / divisor + abs(theta)


@dataclass(frozen=True)
class EdgeSegment:
    """One traced edge.

    ``path`` holds the segment's column on each row it spans, starting at
    ``start[0]``.
    """

    start: tuple[int, int]
    length_l: int
    thickness_t: float
    theta: float
    rank_r: float
    path: tuple[int, ...] = field(default=(), repr=False)
    truncated: bool = False

    @property
    def rows(self) -> range:
        return range(self.start[0], self.start[0] + self.length_l)

    def shifted(self, drow: int, dcol: int) -> "EdgeSegment":
        return EdgeSegment(
            (self.start[0] + drow, self.start[1] + dcol),
            self.length_l,
            self.thickness_t,
            self.theta,
            self.rank_r,
            tuple(c + dcol for c in self.path),
            self.truncated,
        )


def _geometric_theta(path) -> float:
    if len(path) < 2:
        return _HALF_PI
    return math.atan2(len(path) - 1, abs(path[-1] - path[0]))


def segment_theta(path, row0: int, normal: np.ndarray, undefined: np.ndarray) -> float:
    """Median edge angle over the path's pixels, skipping zero-gradient pixels.

    Falls back to the angle of the chord from first to last pixel when every
    pixel on the path has an undefined gradient.
    """
    rr = np.arange(row0, row0 + len(path))
    cc = np.asarray(path)
    keep = ~undefined[rr, cc]
    if not keep.any():
        return _geometric_theta(path)
    return float(np.median(normal[rr[keep], cc[keep]]))


def skeleton(bits, reach: int = RUN_REACH):
    """Reduce each horizontal run to its middle pixel and measure run widths.

    Returns ``(skel, width)``. ``skel`` keeps the pixel whose left and right
    neighbour counts differ by 0 or 1 (the left-middle pixel of an even
    run); runs of ``2 * reach`` or more pixels are near-horizontal structure
    and keep nothing. ``width`` is the width of the run through each set
    pixel, counting at most ``reach`` pixels either side.
    """
    bits = np.asarray(bits, dtype=bool)
    left, right = _kernels.run_extents(bits.view(np.uint8), reach)
    skew = right - left
    skel = bits & (skew >= 0) & (skew <= 1) & (right < reach)
    return skel, left + right + 1


def trace_segments(
    bits,
    normal,
    undefined=None,
    min_len: int = 6,
    mode: str = MAXIMAL_RUNS,
    divisor: float = RANK_DIVISOR,
    max_len: int = 0,
    reach: int = RUN_REACH,
    window=None,
) -> list[EdgeSegment]:
    """Trace and rank segments in a binary edge map.

    In ``maximal-runs`` mode chains start only on the run-middle skeleton
    (see :func:`skeleton`), at pixels with no skeleton pixel in the three
    cells above; a thick edge thus yields one chain rather than one per
    column, and an edge hanging below a horizontal band still gets a start.
    Chains then walk the full map.

    Parameters
    ----------
    bits : bool array
        Thresholded edge map.
    normal : float array
        Per-pixel edge angle in ``[0, pi/2]`` (see ``detect.edge_normal_angle``).
    undefined : bool array, optional
        Pixels whose gradient is zero; excluded from the angle median.
    min_len : int
        Segments spanning fewer rows are dropped.
    mode : {"maximal-runs", "per-pixel-runs"}
        ``per-pixel-runs`` starts a chain at every set pixel;
        ``maximal-runs`` as described above.
    max_len : int
        If positive, chains stop after this many rows and are flagged truncated.
    window : (r0, r1, c0, c1), optional
        Only pixels in this half-open window may start a chain.

    Returns
    -------
    list of EdgeSegment in row-major order of their start pixel.
    """
    bits = np.asarray(bits, dtype=bool)
    normal = np.asarray(normal, dtype=np.float64)
    if bits.shape != normal.shape:
        raise ValueError(f"edge map {bits.shape} and angle field {normal.shape} differ")
    if undefined is None:
        undefined = np.zeros(bits.shape, dtype=bool)
    elif undefined.shape != bits.shape:
        raise ValueError("undefined-gradient mask shape differs from edge map")
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    if mode not in SCAN_MODES:
        raise ValueError(f"unknown scan mode {mode!r}")
    h, w = bits.shape
    r0, r1, c0, c1 = window if window is not None else (0, h, 0, w)

    skel, width = skeleton(bits, reach)
    maximal = mode == MAXIMAL_RUNS
    seeds = skel if maximal else bits
    rows, cols, lengths, wsums, trunc, offsets, path = _kernels.trace_chains(
        bits.view(np.uint8), seeds.view(np.uint8), width, maximal,
        min_len, max_len, r0, r1, c0, c1
    )
    out = []
    for i in range(len(rows)):
        p = path[offsets[i]:offsets[i + 1]]
        l = int(lengths[i])
        t = int(wsums[i]) / l
        theta = segment_theta(p, int(rows[i]), normal, undefined)
        out.append(
            EdgeSegment(
                (int(rows[i]), int(cols[i])),
                l,
                t,
                theta,
                rank(l, t, theta, divisor),
                tuple(p.tolist()),
                bool(trunc[i]),
            )
        )
    return out


def best_edge(segments) -> EdgeSegment:
    """Highest rank; ties go to the longer segment, then the smaller start."""
    if not segments:
        raise ValueError("empty rank vector: no edge segments")
    return min(segments, key=lambda s: (-s.rank_r, -s.length_l, s.start))


def sort_ranked(segments) -> list[EdgeSegment]:
    """Stable sort by descending rank."""
    return sorted(segments, key=lambda s: -s.rank_r)
