"""Automated best-edge selection and MTF measurement for grayscale images."""

__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402
from .batch import BatchReport, TileSpec, plan_tiles, process_tiles  # noqa: E402
from .mtf import extract_esf, lsf_from_esf, mtf50, mtf_from_lsf  # noqa: E402
from .pipeline import PipelineConfig, find_segments  # noqa: E402
from .raster import Image, crop, load_pgm, write_pgm  # noqa: E402
from .segment import EdgeSegment, best_edge, rank, sort_ranked, trace_segments  # noqa: E402
from .synth import EdgeTarget, render  # noqa: E402
