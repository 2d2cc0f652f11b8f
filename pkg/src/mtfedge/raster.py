"""Grayscale rasters and the PGM codec.

Coordinates everywhere in the package are 0-based ``(row, col)`` with the
origin at the top-left pixel.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Image",
    "PgmError",
    "PgmFile",
    "crop",
    "load_image",
    "load_pgm",
    "read_image",
    "write_pgm",
]


class PgmError(ValueError):
    """Raised for malformed, truncated or unsupported PGM data."""


@dataclass(frozen=True, eq=False)
class Image:
    """Immutable 2-D grayscale raster of float64 intensities."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.array(self.pixels, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"image must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("image intensities must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_list(cls, width: int, height: int, values) -> "Image":
        values = list(values)
        if len(values) != width * height:
            raise ValueError(
                f"expected {width * height} pixels for {width}x{height}, got {len(values)}"
            )
        return cls(np.asarray(values, dtype=np.float64).reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __getitem__(self, rc):
        return self.pixels[rc]

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __hash__(self):
        return hash((self.shape, self.pixels.tobytes()))

    def crop(self, top: int, left: int, h: int, w: int) -> "Image":
        return crop(self, top, left, h, w)

    def window(self, top: int, left: int, h: int, w: int) -> "Image":
        # Same protocol as PgmFile.window, so batch code can take either.
        return crop(self, top, left, h, w)


def crop(img: Image, top: int, left: int, h: int, w: int) -> Image:
    """Return the ``h x w`` window whose top-left corner is ``(top, left)``."""
    if h < 1 or w < 1 or top < 0 or left < 0 or top + h > img.height or left + w > img.width:
        raise IndexError(
            f"window (top={top}, left={left}, h={h}, w={w}) outside "
            f"{img.height}x{img.width} image"
        )
    return Image(img.pixels[top:top + h, left:left + w])


# -- PGM ---------------------------------------------------------------------

_TOKEN = re.compile(rb"#[^\n\r]*|\S+")


def _parse_header(data: bytes):
    """Parse magic, width, height, maxval. Returns them plus the payload offset."""
    if len(data) < 2:
        raise PgmError("empty or truncated PGM header")
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmError(f"unsupported magic {magic!r}; expected P5 or P2")
    fields = []
    pos = 2
    while len(fields) < 3:
        m = _TOKEN.search(data, pos)
        if m is None:
            raise PgmError("truncated PGM header")
        pos = m.end()
        tok = m.group()
        if tok.startswith(b"#"):
            continue
        if not tok.isdigit():
            raise PgmError(f"malformed PGM header token {tok!r}")
        fields.append(int(tok))
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PgmError(f"invalid PGM dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise PgmError(f"maxval {maxval} outside 1..65535")
    if magic == b"P5":
        # Exactly one whitespace byte separates the header from binary samples.
        if pos >= len(data) or data[pos:pos + 1] not in b" \t\r\n":
            raise PgmError("missing whitespace after PGM header")
        pos += 1
    return magic, width, height, maxval, pos


def load_pgm(data: bytes) -> Image:
    """Decode a P5 (binary) or P2 (ASCII) PGM. Samples are not rescaled."""
    magic, width, height, maxval, offset = _parse_header(bytes(data))
    n = width * height
    if magic == b"P5":
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = n * dtype.itemsize
        payload = data[offset:offset + need]
        if len(payload) < need:
            raise PgmError(f"truncated pixel data: need {need} bytes, got {len(payload)}")
        values = np.frombuffer(payload, dtype=dtype)
    else:
        tokens = [t for t in _TOKEN.findall(data[offset:]) if not t.startswith(b"#")]
        if len(tokens) < n:
            raise PgmError(f"truncated pixel data: need {n} samples, got {len(tokens)}")
        try:
            values = np.array([int(t) for t in tokens[:n]], dtype=np.int64)
        except ValueError as exc:
            raise PgmError(f"malformed ASCII sample: {exc}") from None
    if values.max(initial=0) > maxval:
        raise PgmError("sample exceeds maxval")
    return Image(values.reshape(height, width).astype(np.float64))


def write_pgm(img: Image, maxval: int = 255) -> bytes:
    """Encode as binary P5; intensities are rounded and clamped to ``[0, maxval]``."""
    if maxval not in (255, 65535):
        raise ValueError("maxval must be 255 or 65535")
    vals = np.clip(np.rint(img.pixels), 0, maxval)
    dtype = ">u2" if maxval == 65535 else "u1"
    header = b"P5\n%d %d\n%d\n" % (img.width, img.height, maxval)
    return header + vals.astype(dtype).tobytes()


class PgmFile:
    """Lazily-read PGM on disk.

    For P5 files the payload is memory-mapped, so :meth:`window` touches only
    the rows it needs. P2 files are decoded eagerly.
    """

    def __init__(self, path):
        self.path = Path(path)
        with open(self.path, "rb") as fh:
            head = fh.read(4096)
        magic, self.width, self.height, self.maxval, offset = _parse_header(head)
        if magic == b"P5":
            dtype = np.dtype(">u2") if self.maxval > 255 else np.dtype("u1")
            need = offset + self.width * self.height * dtype.itemsize
            if self.path.stat().st_size < need:
                raise PgmError("truncated pixel data")
            self._data = np.memmap(
                self.path, dtype=dtype, mode="r", offset=offset,
                shape=(self.height, self.width),
            )
        else:
            self._data = load_pgm(self.path.read_bytes()).pixels

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    def window(self, top: int, left: int, h: int, w: int) -> Image:
        if top < 0 or left < 0 or top + h > self.height or left + w > self.width:
            raise IndexError("window outside image")
        return Image(np.asarray(self._data[top:top + h, left:left + w], dtype=np.float64))

    def read(self) -> Image:
        return self.window(0, 0, self.height, self.width)


def _load_png(path) -> Image:
    try:
        from PIL import Image as PILImage
    except ImportError:  # pragma: no cover - depends on optional extra
        raise PgmError("PNG input requires Pillow (pip install 'mtfedge[png]')") from None
    with PILImage.open(path) as im:
        if im.mode in ("L", "I", "I;16", "I;16B", "F"):
            arr = np.asarray(im, dtype=np.float64)
        else:
            rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
            arr = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return Image(arr)


def load_image(path) -> Image:
    """Read a PGM (P2/P5) or, if Pillow is available, a PNG from disk."""
    path = Path(path)
    with open(path, "rb") as fh:
        sig = fh.read(8)
    if sig.startswith(b"\x89PNG"):
        return _load_png(path)
    return load_pgm(path.read_bytes())


def read_image(path):
    """Open ``path`` for windowed reads: a :class:`PgmFile` for PGMs, else an Image."""
    path = Path(path)
    with open(path, "rb") as fh:
        sig = fh.read(8)
    if sig.startswith(b"\x89PNG"):
        return _load_png(path)
    return PgmFile(path)
