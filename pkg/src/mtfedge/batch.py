"""Tile-parallel version of the ranking pipeline for large rasters.

The image is cut into a grid of disjoint *cores*. Each tile reads its core
plus a *halo* of surrounding pixels, runs the whole pipeline on that crop,
and keeps only the segments that start inside its core. The halo is wide
enough that every kept segment sees exactly the pixels it would see in an
untiled run, so the merged result matches the single-pass result
float-for-float (as long as no segment is longer than ``max_len``).
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import detect
from .pipeline import PipelineConfig, find_segments, log_response
from .segment import RUN_REACH, EdgeSegment, best_edge

__all__ = ["BatchReport", "TileSpec", "halo_width", "plan_tiles", "process_tiles"]

MIN_TILE = 16
SOBEL_RADIUS = 1


@dataclass(frozen=True)
class TileSpec:
    index: int
    core: tuple[int, int, int, int]  # top, left, height, width
    halo: int
    image_shape: tuple[int, int]  # height, width

    @property
    def crop(self) -> tuple[int, int, int, int]:
        """Core grown by the halo and clamped to the image."""
        top, left, h, w = self.core
        H, W = self.image_shape
        t0, l0 = max(0, top - self.halo), max(0, left - self.halo)
        t1, l1 = min(H, top + h + self.halo), min(W, left + w + self.halo)
        return t0, l0, t1 - t0, l1 - l0


def halo_width(max_len: int, kernel_radius: int = 2, reach: int = RUN_REACH) -> int:
    """Margin that lets any segment of up to ``max_len`` rows be traced locally.

    Edge-operator radius + gradient radius + the segment's reach (it may
    drift one column per row) + the look-ahead row, plus the horizontal run
    measurement reach.
    """
    return kernel_radius + SOBEL_RADIUS + max_len + 1 + reach


def plan_tiles(width: int, height: int, tile: int, max_len: int,
               kernel_radius: int = 2, reach: int = RUN_REACH) -> list[TileSpec]:
    """Grid of ``tile x tile`` cores, ragged at the right and bottom, in row-major order."""
    if tile < MIN_TILE:
        raise ValueError(f"tile must be >= {MIN_TILE}, got {tile}")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be positive")
    halo = halo_width(max_len, kernel_radius, reach)
    tiles = []
    for top in range(0, height, tile):
        for left in range(0, width, tile):
            core = (top, left, min(tile, height - top), min(tile, width - left))
            tiles.append(TileSpec(len(tiles), core, halo, (height, width)))
    return tiles


@dataclass
class BatchReport:
    merged: list[EdgeSegment]
    best: EdgeSegment | None
    tiles_processed: int
    tile_ms: list[float] = field(default_factory=list)
    threshold: float = 0.0

    @property
    def truncated(self) -> int:
        return sum(s.truncated for s in self.merged)


def _check_tiles(tiles, shape):
    H, W = shape
    area = 0
    for t in tiles:
        if t.image_shape != (H, W):
            raise ValueError(f"tile {t.index} planned for {t.image_shape}, image is {shape}")
        top, left, h, w = t.core
        if top < 0 or left < 0 or top + h > H or left + w > W:
            raise ValueError(f"tile {t.index} core outside image")
        area += h * w
    if area != H * W:
        raise ValueError("tile cores do not cover the image exactly")


def _source_shape(source):
    return tuple(source.shape)


def _core_peak(source, spec: TileSpec, cfg: PipelineConfig) -> float:
    top, left, h, w = spec.core
    H, W = spec.image_shape
    r = cfg.kernel_radius
    t0, l0 = max(0, top - r), max(0, left - r)
    t1, l1 = min(H, top + h + r), min(W, left + w + r)
    img = source.window(t0, l0, t1 - t0, l1 - l0)
    resp = log_response(img, cfg)
    core = resp[top - t0:top - t0 + h, left - l0:left - l0 + w]
    return float(np.max(np.abs(core)))


def _run_tile(source, spec: TileSpec, cfg: PipelineConfig, threshold: float):
    t_start = time.perf_counter()
    ct, cl, ch, cw = spec.crop
    img = source.window(ct, cl, ch, cw)
    top, left, h, w = spec.core
    window = (top - ct, top - ct + h, left - cl, left - cl + w)
    segs = find_segments(img, cfg, threshold=threshold, window=window,
                         max_len=cfg.max_len)
    segs = [s.shifted(ct, cl) for s in segs]
    return segs, (time.perf_counter() - t_start) * 1000.0


def global_threshold(source, tiles, cfg: PipelineConfig, pool=None) -> float:
    """Resolve the threshold for the whole image, computing auto from all cores."""
    if cfg.threshold is not None:
        return cfg.threshold
    run = pool.map if pool is not None else map
    peak = max(run(lambda t: _core_peak(source, t, cfg), tiles))
    return detect.auto_threshold(np.array([peak]))


def process_tiles(source, tiles, cfg: PipelineConfig, workers: int | None = None) -> BatchReport:
    """Run the pipeline per tile on up to ``workers`` threads and merge.

    ``source`` is an :class:`~mtfedge.raster.Image` or a lazily-read
    :class:`~mtfedge.raster.PgmFile`. Merged segments are in row-major order
    of their global start pixel, independent of scheduling.
    """
    workers = cfg.workers if workers is None else workers
    if workers < 1:
        raise ValueError("workers must be >= 1")
    _check_tiles(tiles, _source_shape(source))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        threshold = global_threshold(source, tiles, cfg, pool if workers > 1 else None)
        if workers > 1:
            results = list(pool.map(lambda t: _run_tile(source, t, cfg, threshold), tiles))
        else:
            results = [_run_tile(source, t, cfg, threshold) for t in tiles]

    merged = [s for segs, _ in results for s in segs]
    merged.sort(key=lambda s: s.start)
    return BatchReport(
        merged=merged,
        best=best_edge(merged) if merged else None,
        tiles_processed=len(tiles),
        tile_ms=[ms for _, ms in results],
        threshold=threshold,
    )
