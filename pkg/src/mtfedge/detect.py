"""Spatial-domain edge operators: LoG, Sobel/Prewitt gradients, thresholding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .raster import Image

__all__ = [
    "GradientField",
    "LOG_5X5",
    "PREWITT_X",
    "SOBEL_X",
    "as_kernel",
    "auto_threshold",
    "binary_threshold",
    "convolve2d",
    "edge_normal_angle",
    "gradient",
    "gradient_direction",
    "gradient_magnitude",
    "log_kernel_5x5",
]

LOG_5X5 = np.array(
    [
        [0, 0, 1, 0, 0],
        [0, 1, 2, 1, 0],
        [1, 2, -16, 2, 1],
        [0, 1, 2, 1, 0],
        [0, 0, 1, 0, 0],
    ],
    dtype=np.float64,
)
LOG_5X5.setflags(write=False)

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
PREWITT_X = np.array([[-1, 0, 1], [-1, 0, 1], [-1, 0, 1]], dtype=np.float64)
SOBEL_X.setflags(write=False)
PREWITT_X.setflags(write=False)

_GRADIENT_OPS = {"sobel": SOBEL_X, "prewitt": PREWITT_X}

# Fraction of max|LoG| used when the threshold is "auto".
AUTO_THRESHOLD_FRACTION = 0.2


def as_kernel(weights) -> np.ndarray:
    """Validate a square, odd-sized, finite kernel and return it as float64."""
    k = np.array(weights, dtype=np.float64)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ValueError(f"kernel must be square, got shape {k.shape}")
    if k.shape[0] % 2 != 1:
        raise ValueError("kernel size must be odd")
    if not np.all(np.isfinite(k)):
        raise ValueError("kernel weights must be finite")
    k.setflags(write=False)
    return k


def log_kernel_5x5() -> np.ndarray:
    return LOG_5X5


def _pixels(img) -> np.ndarray:
    return img.pixels if isinstance(img, Image) else np.asarray(img, dtype=np.float64)


def convolve2d(img, kernel) -> np.ndarray:
    """Correlate ``img`` with ``kernel`` using replicate (clamp-to-edge) borders.

    ``out[r, c] = sum_ij k[i, j] * img[r + i - s, c + j - s]`` with ``s = size // 2``.
    The output has the same shape as the input.
    """
    px = _pixels(img)
    k = as_kernel(kernel)
    if k.shape[0] > min(px.shape):
        raise ValueError(
            f"kernel size {k.shape[0]} larger than image {px.shape[0]}x{px.shape[1]}"
        )
    return _kernels.convolve2d(px, k)


@dataclass(frozen=True, eq=False)
class GradientField:
    gx: np.ndarray
    gy: np.ndarray

    def __post_init__(self):
        if self.gx.shape != self.gy.shape:
            raise ValueError("gx and gy must have the same shape")


def gradient(img, op: str = "sobel") -> GradientField:
    """First-derivative gradient; x follows columns, y follows rows."""
    px = _pixels(img)
    if px.shape[0] < 3 or px.shape[1] < 3:
        raise ValueError("gradient needs an image of at least 3x3")
    try:
        kx = _GRADIENT_OPS[op]
    except KeyError:
        raise ValueError(f"unknown gradient operator {op!r}") from None
    return GradientField(_kernels.convolve2d(px, kx), _kernels.convolve2d(px, kx.T))


def gradient_magnitude(g: GradientField) -> np.ndarray:
    return np.hypot(g.gx, g.gy)


def gradient_direction(g: GradientField) -> np.ndarray:
    """``arctan(gy / gx)`` in ``(-pi/2, pi/2]``.

    ``gx == 0`` maps to ``pi/2`` unless ``gy`` is also zero, in which case the
    direction is undefined and the sentinel 0 is stored.
    """
    gx, gy = g.gx, g.gy
    vertical = gx == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.arctan(gy / np.where(vertical, 1.0, gx))
    alpha = np.where(vertical, np.pi / 2, alpha)
    return np.where(vertical & (gy == 0), 0.0, alpha)


def zero_gradient_mask(g: GradientField) -> np.ndarray:
    return (g.gx == 0) & (g.gy == 0)


def edge_normal_angle(alpha):
    """Angle of the edge (perpendicular to the gradient), folded into ``[0, pi/2]``."""
    return np.pi / 2 - np.abs(alpha)


def binary_threshold(img, t: float) -> np.ndarray:
    """Boolean map of ``|img| >= t``; magnitude because LoG responses are signed."""
    if t < 0:
        raise ValueError("threshold must be non-negative")
    return np.abs(_pixels(img)) >= t


def auto_threshold(response) -> float:
    """Default threshold: a fixed fraction of the peak absolute response.

    A response that is identically zero yields ``inf`` so that no pixel
    survives; a blank image has no edges.
    """
    peak = float(np.max(np.abs(response)))
    if peak == 0.0:
        return float("inf")
    return AUTO_THRESHOLD_FRACTION * peak
