"""Single-pass detect -> threshold -> gradient -> trace pipeline."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import detect
from .raster import Image
from .segment import MAXIMAL_RUNS, RANK_DIVISOR, RUN_REACH, SCAN_MODES, trace_segments

__all__ = ["PipelineConfig", "default_workers", "find_segments", "log_response"]


def default_workers() -> int:
    env = os.environ.get("MTFEDGE_THREADS")
    if env:
        return max(1, int(env))
    return 1


@dataclass(frozen=True)
class PipelineConfig:
    threshold: float | None = None  # None means auto (0.2 * max|LoG|)
    min_len: int = 6
    scan_mode: str = MAXIMAL_RUNS
    gradient_op: str = "sobel"
    half_window: int = 8
    rank_divisor: float = RANK_DIVISOR
    tile: int = 512
    max_len: int = 256
    workers: int = field(default_factory=default_workers)
    kernel: np.ndarray = field(default_factory=detect.log_kernel_5x5, compare=False)
    run_reach: int = RUN_REACH

    def __post_init__(self):
        object.__setattr__(self, "kernel", detect.as_kernel(self.kernel))
        if self.threshold is not None and not self.threshold >= 0:
            raise ValueError("threshold must be >= 0 or auto")
        if self.min_len < 1:
            raise ValueError("min_len must be >= 1")
        if self.scan_mode not in SCAN_MODES:
            raise ValueError(f"scan_mode must be one of {SCAN_MODES}")
        if self.gradient_op not in ("sobel", "prewitt"):
            raise ValueError("gradient_op must be sobel or prewitt")
        if self.half_window < 2:
            raise ValueError("half_window must be >= 2")
        if not self.rank_divisor > 0:
            raise ValueError("rank_divisor must be positive")
        if self.tile < 16:
            raise ValueError("tile must be >= 16")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.run_reach < 1:
            raise ValueError("run_reach must be >= 1")

    @property
    def kernel_radius(self) -> int:
        return self.kernel.shape[0] // 2


def log_response(img: Image, cfg: PipelineConfig) -> np.ndarray:
    return detect.convolve2d(img, cfg.kernel)


def find_segments(img: Image, cfg: PipelineConfig, threshold: float | None = None,
                  window=None, max_len: int = 0):
    """Run the full pipeline on ``img`` and return segments in scan order.

    ``threshold`` overrides ``cfg.threshold``; when both are None the auto
    rule is applied to this image's response.
    """
    response = log_response(img, cfg)
    if threshold is None:
        threshold = cfg.threshold
    if threshold is None:
        threshold = detect.auto_threshold(response)
    bits = detect.binary_threshold(response, threshold)
    g = detect.gradient(img, cfg.gradient_op)
    normal = detect.edge_normal_angle(detect.gradient_direction(g))
    undefined = detect.zero_gradient_mask(g)
    return trace_segments(
        bits, normal, undefined,
        min_len=cfg.min_len, mode=cfg.scan_mode, divisor=cfg.rank_divisor,
        max_len=max_len, reach=cfg.run_reach, window=window,
    )
