"""Edge profile -> line spread -> modulation transfer function."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import Image
from .segment import EdgeSegment

__all__ = [
    "EsfProfile",
    "LsfProfile",
    "MtfCurve",
    "extract_esf",
    "lsf_from_esf",
    "mtf50",
    "mtf_from_lsf",
]

NYQUIST = 0.5


@dataclass(frozen=True, eq=False)
class EsfProfile:
    samples: np.ndarray
    spacing: float = 1.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 1 or s.size < 4:
            raise ValueError("ESF needs at least 4 samples")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        object.__setattr__(self, "samples", s)


@dataclass(frozen=True, eq=False)
class LsfProfile:
    samples: np.ndarray
    spacing: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class MtfCurve:
    frequencies: np.ndarray
    modulation: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.frequencies.tolist(), self.modulation.tolist()))

    def to_csv(self) -> str:
        lines = ["frequency_cpp,modulation"]
        lines += [f"{f:.6f},{m:.6f}" for f, m in self.points]
        return "\n".join(lines) + "\n"


def extract_esf(img: Image, seg: EdgeSegment, half_window: int = 8) -> EsfProfile:
    """Average the rows crossed by ``seg``, each aligned on the segment's column.

    Sample ``d`` (for ``d`` in ``-half_window..half_window``) is the mean of
    ``img[r, c_r + d]`` over the segment's rows, where ``c_r`` is the column
    of the segment on row ``r``.
    """
    if half_window < 2:
        raise ValueError("half_window must be >= 2")
    if seg.length_l < 2 or len(seg.path) != seg.length_l:
        raise ValueError("segment must span at least 2 rows with a known path")
    rows = np.arange(seg.start[0], seg.start[0] + seg.length_l)
    centers = np.asarray(seg.path)
    lo, hi = centers.min() - half_window, centers.max() + half_window
    if lo < 0 or hi >= img.width or rows[0] < 0 or rows[-1] >= img.height:
        raise ValueError(
            f"ESF window of +/-{half_window} px leaves the image; "
            "try a smaller half_window"
        )
    offsets = np.arange(-half_window, half_window + 1)
    block = img.pixels[rows[:, None], centers[:, None] + offsets[None, :]]
    return EsfProfile(block.mean(axis=0), 1.0)


def lsf_from_esf(esf: EsfProfile, method: str = "forward") -> LsfProfile:
    """Differentiate the ESF.

    ``forward`` gives ``N - 1`` samples ``(e[i+1] - e[i]) / spacing``;
    ``central`` gives ``N - 2`` samples ``(e[i+2] - e[i]) / (2 * spacing)``.
    """
    e = esf.samples
    if e.size < 4:
        raise ValueError("ESF needs at least 4 samples")
    if method == "forward":
        d = (e[1:] - e[:-1]) / esf.spacing
    elif method == "central":
        d = (e[2:] - e[:-2]) / (2.0 * esf.spacing)
    else:
        raise ValueError(f"unknown difference method {method!r}")
    return LsfProfile(d, esf.spacing)


def dft_magnitude(x) -> np.ndarray:
    """``|sum_k x[k] exp(-2 pi i u k / N)|`` for ``u = 0 .. N // 2``, by direct summation."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    u = np.arange(n // 2 + 1)[:, None]
    k = np.arange(n)[None, :]
    phase = 2.0 * np.pi * ((u * k) % n) / n
    re = np.cos(phase) @ x
    im = -np.sin(phase) @ x
    return np.hypot(re, im)


def mtf_from_lsf(lsf: LsfProfile) -> MtfCurve:
    """DC-normalized DFT magnitude of the LSF, reported in cycles/pixel."""
    x = lsf.samples
    if x.size < 3:
        raise ValueError("LSF needs at least 3 samples")
    dc = x.sum()
    if dc == 0.0 or abs(dc) <= 1e-12 * np.abs(x).sum():
        raise ValueError("LSF has zero DC component (edge without contrast)")
    n = x.size
    mag = dft_magnitude(x)
    freqs = np.arange(mag.size) / (n * lsf.spacing)
    keep = freqs <= NYQUIST
    return MtfCurve(freqs[keep], mag[keep] / mag[0])


def mtf50(curve: MtfCurve):
    """First frequency where the curve falls to 0.5 (linear interpolation), else None."""
    f, m = curve.frequencies, curve.modulation
    for i in range(1, m.size):
        if m[i] <= 0.5 < m[i - 1]:
            return float(f[i - 1] + (m[i - 1] - 0.5) * (f[i] - f[i - 1]) / (m[i - 1] - m[i]))
    return None
