"""Synthetic edge targets and closed-form MTF oracles."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .raster import Image

__all__ = [
    "EdgeTarget",
    "NOISE_ALGORITHM",
    "analytic_gaussian_mtf",
    "analytic_mtf50",
    "render",
    "sampled_model_mtf",
]

NOISE_ALGORITHM = "numpy.PCG64"


@dataclass(frozen=True)
class EdgeTarget:
    """A straight edge through the image center.

    ``edge_angle`` is measured from the x-axis (``pi/2`` is vertical) and
    ``edge_offset`` shifts the line along its normal, in pixels. Pixels on
    the normal's positive side (the right side of a vertical edge) go to
    ``high``.
    """

    width: int
    height: int
    edge_angle: float = math.pi / 2
    edge_offset: float = 0.0
    low: float = 0.0
    high: float = 200.0
    blur_sigma: float = 0.0
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("target dimensions must be positive")
        if not self.low < self.high:
            raise ValueError("low must be below high")
        if not 0.0 < self.edge_angle <= math.pi / 2:
            raise ValueError("edge_angle must lie in (0, pi/2]")
        if self.blur_sigma < 0 or self.noise_sigma < 0:
            raise ValueError("blur_sigma and noise_sigma must be non-negative")
        if 4.0 * self.blur_sigma >= min(self.width, self.height) / 2.0:
            raise ValueError("blur too large for image (need 4*sigma < min(w, h) / 2)")


def signed_distance(width: int, height: int, angle: float, offset: float = 0.0,
                    mirror: bool = False) -> np.ndarray:
    """Signed distance of each pixel center from the edge line.

    Pixel ``(r, c)`` has its center at ``x = c + 0.5``, ``y = r + 0.5``; the
    line passes through ``(width / 2, height / 2)`` shifted by ``offset``
    along its normal. ``mirror`` reflects x, which mirrors the columns.
    """
    x = np.arange(width, dtype=np.float64) + 0.5
    if mirror:
        x = width - x
    y = np.arange(height, dtype=np.float64) + 0.5
    nx, ny = math.sin(angle), math.cos(angle)
    return (x[None, :] - width / 2.0) * nx + (y[:, None] - height / 2.0) * ny - offset


def render(target: EdgeTarget, mirror: bool = False) -> Image:
    """Point-sample a Gaussian-blurred step at pixel centers."""
    d = signed_distance(target.width, target.height, target.edge_angle,
                        target.edge_offset, mirror)
    if target.blur_sigma == 0:
        frac = (d >= 0).astype(np.float64)
    else:
        with np.errstate(over="ignore"):
            frac = ndtr(d / target.blur_sigma)
    img = target.low + (target.high - target.low) * frac
    if target.noise_sigma > 0:
        rng = np.random.Generator(np.random.PCG64(target.seed))
        img = img + rng.normal(0.0, target.noise_sigma, size=img.shape)
    return Image(img)


def analytic_gaussian_mtf(sigma, f):
    """MTF of a continuous Gaussian LSF: ``exp(-2 pi^2 sigma^2 f^2)``."""
    return np.exp(-2.0 * np.pi ** 2 * np.square(sigma) * np.square(f))


def sampled_model_mtf(sigma, f):
    """Gaussian MTF times the ``|sinc(f)|`` introduced by pixel differencing."""
    return analytic_gaussian_mtf(sigma, f) * np.abs(np.sinc(f))


def analytic_mtf50(sigma: float):
    """Frequency where the Gaussian MTF equals 0.5; None for an unblurred edge."""
    if sigma <= 0:
        return None
    return math.sqrt(math.log(2.0) / (2.0 * math.pi ** 2)) / sigma
