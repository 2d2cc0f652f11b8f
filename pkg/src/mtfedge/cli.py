"""Command-line front end: ``mtfedge {rank,batch,mtf,synth}``."""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .batch import plan_tiles, process_tiles
from .mtf import extract_esf, lsf_from_esf, mtf50, mtf_from_lsf
from .pipeline import PipelineConfig, default_workers, find_segments
from .raster import PgmError, load_image, read_image, write_pgm
from .segment import SCAN_MODES, best_edge, sort_ranked
from .synth import EdgeTarget, analytic_mtf50, render

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NO_EDGES = 4

TABLE_HEADER = "edge_rank,edge_length,start_row,start_col,thickness,theta_rad"

_EPILOG = """\
coordinates: 0-based (row, col), origin at the top-left pixel.
exit codes: 0 ok, 2 invalid configuration, 3 I/O or decode error,
            4 no edges / no usable edge found.
environment: MTFEDGE_THREADS sets the default --workers.
"""


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# -- formatting ----------------------------------------------------------------

def _row(s) -> str:
    return (f"{s.rank_r:.4f},{s.length_l},{s.start[0]},{s.start[1]},"
            f"{s.thickness_t:.4f},{s.theta:.6f}")


def _best_line(best) -> str:
    if best is None:
        return "# best: none"
    return (f"# best: rank={best.rank_r:.4f} length={best.length_l} "
            f"start=({best.start[0]},{best.start[1]})")


def _seg_dict(s) -> dict:
    return {
        "edge_rank": s.rank_r,
        "edge_length": s.length_l,
        "start_row": s.start[0],
        "start_col": s.start[1],
        "thickness": s.thickness_t,
        "theta_rad": s.theta,
        "truncated": s.truncated,
    }


def format_table(segments, fmt: str = "csv", extra: dict | None = None) -> str:
    """Render segments (already in display order) as CSV or JSON."""
    best = best_edge(segments) if segments else None
    if fmt == "json":
        doc = {
            "segments": [_seg_dict(s) for s in segments],
            "best": _seg_dict(best) if best is not None else None,
        }
        doc.update(extra or {})
        return json.dumps(doc, indent=2) + "\n"
    lines = [TABLE_HEADER] + [_row(s) for s in segments] + [_best_line(best)]
    for key, value in (extra or {}).items():
        if isinstance(value, list):
            value = ";".join(f"{v:.3f}" for v in value)
        elif isinstance(value, float):
            value = f"{value:.3f}"
        lines.append(f"# {key}: {value}")
    return "\n".join(lines) + "\n"


def curve_to_svg(freqs, mods, width: int = 480, height: int = 320) -> str:
    """Minimal SVG line plot of an MTF curve (0..0.5 cycles/px, 0..1.05 modulation)."""
    pad = 40
    pw, ph = width - 2 * pad, height - 2 * pad
    ymax = max(1.05, float(np.max(mods)) if len(mods) else 1.0)

    def xy(f, m):
        return pad + pw * f / 0.5, pad + ph * (1.0 - m / ymax)

    pts = " ".join("%.2f,%.2f" % xy(f, m) for f, m in zip(freqs, mods))
    x0, y0 = xy(0, 0)
    x1, _ = xy(0.5, 0)
    _, y1 = xy(0, 1.0)
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y0:.2f}" stroke="black"/>',
        f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="{pad}" stroke="black"/>',
        f'<line x1="{x0:.2f}" y1="{y1:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
        'stroke="#bbb" stroke-dasharray="4"/>',
        f'<text x="{width / 2:.0f}" y="{height - 8}" font-size="12" '
        'text-anchor="middle">frequency (cycles/pixel)</text>',
        f'<text x="12" y="{height / 2:.0f}" font-size="12" '
        f'transform="rotate(-90 12 {height / 2:.0f})" text-anchor="middle">MTF</text>',
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="2" points="{pts}"/>',
        "</svg>",
        "",
    ])


# -- commands --------------------------------------------------------------------

def _config(args) -> PipelineConfig:
    kernel = None
    if getattr(args, "kernel", None):
        try:
            kernel = np.loadtxt(args.kernel, ndmin=2)
        except OSError as exc:
            raise CliError(f"cannot read kernel: {exc}", EXIT_IO) from None
    threshold = None if args.threshold in (None, "auto") else float(args.threshold)
    kw = dict(
        threshold=threshold,
        min_len=args.min_len,
        scan_mode=args.scan_mode,
        gradient_op=args.gradient,
        half_window=args.half_window,
        rank_divisor=args.rank_divisor,
        tile=args.tile,
        max_len=args.max_len,
        workers=args.workers,
    )
    if kernel is not None:
        kw["kernel"] = kernel
    try:
        return PipelineConfig(**kw)
    except ValueError as exc:
        raise CliError(f"invalid configuration: {exc}", EXIT_CONFIG) from None


def _load(path):
    try:
        return load_image(path)
    except (OSError, PgmError, ValueError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_rank(args) -> int:
    cfg = _config(args)
    img = _load(args.input)
    segs = sort_ranked(find_segments(img, cfg))
    _emit(format_table(segs, args.format), args.out)
    return EXIT_OK if segs else EXIT_NO_EDGES


def cmd_batch(args) -> int:
    cfg = _config(args)
    try:
        source = read_image(args.input)
    except (OSError, PgmError, ValueError) as exc:
        raise CliError(f"cannot read {args.input}: {exc}", EXIT_IO) from None
    t0 = time.perf_counter()
    H, W = source.shape
    tiles = plan_tiles(W, H, cfg.tile, cfg.max_len, cfg.kernel_radius, cfg.run_reach)
    report = process_tiles(source, tiles, cfg)
    wall = time.perf_counter() - t0
    extra = {
        "tiles_processed": report.tiles_processed,
        "truncated": report.truncated,
        "wall_time_s": wall,
        "tile_ms": report.tile_ms,
    }
    _emit(format_table(sort_ranked(report.merged), args.format, extra), args.out)
    return EXIT_OK if report.merged else EXIT_NO_EDGES


def cmd_mtf(args) -> int:
    cfg = _config(args)
    img = _load(args.input)
    segs = find_segments(img, cfg)
    if not segs:
        raise CliError("no usable edge found", EXIT_NO_EDGES)
    best = best_edge(segs)
    try:
        esf = extract_esf(img, best, cfg.half_window)
        curve = mtf_from_lsf(lsf_from_esf(esf))
    except ValueError as exc:
        raise CliError(f"no usable edge: {exc}", EXIT_NO_EDGES) from None
    csv = curve.to_csv()
    if args.out:
        Path(args.out).write_text(csv)
    else:
        sys.stdout.write(csv)
    if args.svg:
        Path(args.svg).write_text(curve_to_svg(curve.frequencies, curve.modulation))
    m50 = mtf50(curve)
    msg = f"{_best_line(best)}\nmtf50: " + ("no crossing" if m50 is None else f"{m50:.6f}")
    print(msg, file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        target = EdgeTarget(
            width=args.width,
            height=args.height,
            edge_angle=math.radians(args.angle),
            edge_offset=args.offset,
            low=args.low,
            high=args.high,
            blur_sigma=args.sigma,
            noise_sigma=args.noise,
            seed=args.seed,
        )
    except ValueError as exc:
        raise CliError(f"invalid target: {exc}", EXIT_CONFIG) from None
    img = render(target)
    maxval = 255 if target.high <= 255 else 65535
    try:
        Path(args.out).write_bytes(write_pgm(img, maxval))
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from None
    m50 = analytic_mtf50(target.blur_sigma)
    print("analytic_mtf50: " + ("no crossing" if m50 is None else f"{m50:.6f}"))
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------

def _threshold(value: str):
    if value == "auto":
        return value
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("threshold must be a number or 'auto'") from None
    return v


def _pipeline_args(p):
    p.add_argument("input", help="grayscale PGM (P2/P5) or PNG")
    p.add_argument("--threshold", type=_threshold, default="auto",
                   help="absolute |LoG| threshold, or 'auto' = 0.2*max|LoG| (default)")
    p.add_argument("--min-len", type=int, default=6, help="minimum segment length (rows)")
    p.add_argument("--scan-mode", choices=SCAN_MODES, default="maximal-runs")
    p.add_argument("--gradient", choices=("sobel", "prewitt"), default="sobel")
    p.add_argument("--half-window", type=int, default=8, help="ESF half width (px)")
    p.add_argument("--rank-divisor", type=float, default=10.0)
    p.add_argument("--tile", type=int, default=512, help="tile core size (px)")
    p.add_argument("--max-len", type=int, default=256,
                   help="longest segment traced exactly across tiles")
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--kernel", help="text file with an alternative odd square edge kernel")
    p.add_argument("--out", help="write the table/curve here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtfedge",
        description="Rank edges in grayscale images and measure MTF from the best one.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({_kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in (
        ("rank", cmd_rank, "rank all edge segments in one pass"),
        ("batch", cmd_batch, "rank edges with the tile-parallel pipeline"),
        ("mtf", cmd_mtf, "compute the MTF from the best-ranked edge"),
    ):
        p = sub.add_parser(name, help=help_, epilog=_EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        _pipeline_args(p)
        if name != "mtf":
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        else:
            p.add_argument("--svg", help="also write an SVG plot of the curve")
        p.set_defaults(func=func)

    p = sub.add_parser("synth", help="write a synthetic edge target PGM")
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--height", type=int, default=256)
    p.add_argument("--angle", type=float, default=90.0, help="edge angle from x-axis, degrees")
    p.add_argument("--offset", type=float, default=0.0, help="edge offset from center (px)")
    p.add_argument("--low", type=float, default=0.0)
    p.add_argument("--high", type=float, default=200.0)
    p.add_argument("--sigma", type=float, default=0.0, help="Gaussian blur sigma (px)")
    p.add_argument("--noise", type=float, default=0.0, help="additive noise sigma")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"mtfedge: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
