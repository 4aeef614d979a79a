"""Grid containers and raster I/O shared by the segmentation modules.

All grids are dense row-major 2-D arrays; the flat index of cell (i, j)
is always ``i * cols + j``.  Instances are immutable after construction
(the backing numpy arrays are marked read-only) and therefore safe to
share between threads.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

LABEL_BACKGROUND = -1
LABEL_UNSET = 0
LABEL_FOREGROUND = 1

# pixel values used when a label map is stored as an 8-bit image
_SEED_PIXEL = {LABEL_UNSET: 0, LABEL_BACKGROUND: 128, LABEL_FOREGROUND: 255}
_PIXEL_SEED = {v: k for k, v in _SEED_PIXEL.items()}

MAX_MAXVAL = 65535


class PgmFormatError(ValueError):
    """Raised when a PGM stream cannot be parsed; message carries the byte offset."""


class SeedEncodingError(ValueError):
    """Raised when an image is not a valid {0,128,255} seed encoding."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Grayscale raster with non-negative integer intensities.

    ``max_representable`` is the largest value the storage format can
    hold (the PGM maxval), not necessarily the largest value present.
    """

    pixels: np.ndarray
    max_representable: int = 255

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2-D grid, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"image intensities must be integers, got dtype {arr.dtype}")
        if not 1 <= self.max_representable <= MAX_MAXVAL:
            raise ValueError(f"max_representable must be in [1, {MAX_MAXVAL}], got {self.max_representable}")
        arr = arr.astype(np.int32, copy=True)
        if arr.min() < 0:
            raise ValueError("image intensities must be non-negative")
        if arr.max() > self.max_representable:
            raise ValueError(
                f"intensity {int(arr.max())} exceeds max_representable {self.max_representable}"
            )
        object.__setattr__(self, "pixels", _freeze(arr))

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    @property
    def max_value(self) -> int:
        """Largest intensity actually present."""
        return int(self.pixels.max())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GrayImage)
            and self.max_representable == other.max_representable
            and np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class LabelMap:
    """Per-pixel three-way labelling: -1 background, 0 unlabelled, +1 foreground."""

    labels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.labels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"label map must be a non-empty 2-D grid, got shape {arr.shape}")
        arr = arr.astype(np.int8, copy=True)
        bad = ~np.isin(arr, (-1, 0, 1))
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValueError(f"label at ({i}, {j}) outside {{-1, 0, +1}}")
        object.__setattr__(self, "labels", _freeze(arr))

    @classmethod
    def unlabelled(cls, rows: int, cols: int) -> "LabelMap":
        return cls(np.zeros((rows, cols), dtype=np.int8))

    @property
    def rows(self) -> int:
        return self.labels.shape[0]

    @property
    def cols(self) -> int:
        return self.labels.shape[1]

    def seed_count(self) -> int:
        return int(np.count_nonzero(self.labels))

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelMap) and np.array_equal(self.labels, other.labels)


@dataclass(frozen=True, eq=False)
class WeightMap:
    """Per-pixel confidence in [0, 1]."""

    weights: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.weights, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"weight map must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("weights must lie in [0, 1]")
        object.__setattr__(self, "weights", _freeze(arr.copy()))

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightMap) and np.array_equal(self.weights, other.weights)


@dataclass(frozen=True, eq=False)
class Mask:
    """Binary region, e.g. a ground truth or a segmentation result."""

    bits: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bits)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"mask must be a non-empty 2-D grid, got shape {arr.shape}")
        object.__setattr__(self, "bits", _freeze(arr.astype(bool, copy=True)))

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    def area(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other) -> bool:
        return isinstance(other, Mask) and np.array_equal(self.bits, other.bits)


def same_shape(*grids) -> bool:
    shapes = {(g.rows, g.cols) for g in grids}
    return len(shapes) == 1


# ---------------------------------------------------------------------------
# PGM (binary P5) reading and writing
# ---------------------------------------------------------------------------

def _parse_header(data: bytes):
    """Parse 'P5 <cols> <rows> <maxval>' allowing comments; return tokens + body offset."""
    if data[:2] != b"P5":
        raise PgmFormatError("not a binary PGM: missing 'P5' magic at byte 0")
    pos = 2
    tokens = []
    while len(tokens) < 3:
        # skip whitespace and '#' comments between tokens
        while pos < len(data):
            c = data[pos : pos + 1]
            if c.isspace():
                pos += 1
            elif c == b"#":
                nl = data.find(b"\n", pos)
                if nl == -1:
                    raise PgmFormatError(f"unterminated comment at byte {pos}")
                pos = nl + 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tok = data[start:pos]
        if not tok.isdigit():
            raise PgmFormatError(f"malformed header token at byte {start}")
        tokens.append(int(tok))
    if pos >= len(data):
        raise PgmFormatError(f"missing whitespace after maxval at byte {pos}")
    pos += 1  # single whitespace byte separating header from samples
    return tokens, pos


def load_pgm(path: str | os.PathLike) -> GrayImage:
    """Read a binary PGM (P5) file, 8- or 16-bit.

    16-bit samples are big-endian per the Netpbm convention.  Malformed
    or truncated files raise :class:`PgmFormatError` naming the byte
    offset of the problem.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    (cols, rows, maxval), offset = _parse_header(data)
    if rows < 1 or cols < 1:
        raise PgmFormatError(f"bad dimensions {cols}x{rows} in header (byte 2)")
    if maxval < 1 or maxval > MAX_MAXVAL:
        raise PgmFormatError(f"maxval {maxval} outside [1, {MAX_MAXVAL}] (header before byte {offset})")
    bytes_per = 1 if maxval < 256 else 2
    need = rows * cols * bytes_per
    body = data[offset : offset + need]
    if len(body) < need:
        raise PgmFormatError(
            f"unexpected end of pixel data at byte {offset + len(body)}"
            f" (expected {need} sample bytes from byte {offset})"
        )
    dtype = np.dtype(">u2") if bytes_per == 2 else np.dtype("u1")
    pixels = np.frombuffer(body, dtype=dtype).reshape(rows, cols)
    return GrayImage(pixels.astype(np.int32), max_representable=maxval)


def save_pgm(image: GrayImage, path: str | os.PathLike) -> None:
    """Write ``image`` as binary PGM; ``load_pgm`` round-trips it bit-exactly."""
    maxval = image.max_representable
    header = f"P5\n{image.cols} {image.rows}\n{maxval}\n".encode("ascii")
    if maxval < 256:
        body = image.pixels.astype("u1").tobytes()
    else:
        body = image.pixels.astype(">u2").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body)


def pgm_bytes(image: GrayImage) -> bytes:
    """The exact byte stream :func:`save_pgm` would write."""
    maxval = image.max_representable
    header = f"P5\n{image.cols} {image.rows}\n{maxval}\n".encode("ascii")
    if maxval < 256:
        return header + image.pixels.astype("u1").tobytes()
    return header + image.pixels.astype(">u2").tobytes()


def pgm_from_bytes(data: bytes) -> GrayImage:
    """Parse an in-memory P5 byte stream (same rules as :func:`load_pgm`)."""
    (cols, rows, maxval), offset = _parse_header(data)
    if rows < 1 or cols < 1:
        raise PgmFormatError(f"bad dimensions {cols}x{rows} in header (byte 2)")
    if maxval < 1 or maxval > MAX_MAXVAL:
        raise PgmFormatError(f"maxval {maxval} outside [1, {MAX_MAXVAL}] (header before byte {offset})")
    bytes_per = 1 if maxval < 256 else 2
    need = rows * cols * bytes_per
    body = data[offset : offset + need]
    if len(body) < need:
        raise PgmFormatError(
            f"unexpected end of pixel data at byte {offset + len(body)}"
            f" (expected {need} sample bytes from byte {offset})"
        )
    dtype = np.dtype(">u2") if bytes_per == 2 else np.dtype("u1")
    pixels = np.frombuffer(body, dtype=dtype).reshape(rows, cols)
    return GrayImage(pixels.astype(np.int32), max_representable=maxval)


# ---------------------------------------------------------------------------
# Seed / label encoding: 0 = unlabelled, 128 = background, 255 = foreground
# ---------------------------------------------------------------------------

def encode_labelmap(labels: LabelMap) -> GrayImage:
    """Encode labels as an 8-bit image viewable in any image viewer."""
    arr = labels.labels
    out = np.zeros(arr.shape, dtype=np.int32)
    out[arr == LABEL_BACKGROUND] = 128
    out[arr == LABEL_FOREGROUND] = 255
    return GrayImage(out, max_representable=255)


def decode_labelmap(image: GrayImage) -> LabelMap:
    """Inverse of :func:`encode_labelmap`; rejects any non {0,128,255} pixel."""
    arr = image.pixels
    bad = ~np.isin(arr, (0, 128, 255))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise SeedEncodingError(f"invalid seed encoding at ({i},{j}): pixel value {int(arr[i, j])}")
    out = np.zeros(arr.shape, dtype=np.int8)
    out[arr == 128] = LABEL_BACKGROUND
    out[arr == 255] = LABEL_FOREGROUND
    return LabelMap(out)


def mask_to_image(mask: Mask) -> GrayImage:
    """Render a mask as a 0/255 image (the on-disk ground-truth format)."""
    return GrayImage(np.where(mask.bits, 255, 0).astype(np.int32), max_representable=255)


def image_to_mask(image: GrayImage) -> Mask:
    """Read a 0/255 image back into a mask; any nonzero pixel counts as set."""
    return Mask(image.pixels > 0)
