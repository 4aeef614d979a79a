"""Programmatic seed annotations and synthetic phantom benchmark cases.

The interior protocol shrinks a ground truth to a target fraction of
its area by repeated 3x3 erosion, falling back to a one-pixel-thick
horizontal cross-section when erosion cannot reach the target without
dying out.  The exterior protocol rings the ground truth at a Chebyshev
distance, clamping to the image border where the ring would leave the
grid.  Both mimic quick human scribbles placed inside and around a
structure of interest.

Phantoms emulate the hard case this project targets: a bright rounded
body containing a dark blob whose intensity sits barely above the
background.  Generation is bit-deterministic across platforms: the only
randomness is a 64-bit linear congruential generator (MMIX constants,
``state = state * 6364136223846793005 + 1442695040888963407 mod 2^64``)
and Gaussian noise is approximated by the Irwin-Hall sum of 12 uniform
draws, so the pixel path never touches platform transcendentals.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from numba import njit
from scipy import ndimage

from .grid import (
    GrayImage,
    LabelMap,
    Mask,
    encode_labelmap,
    load_pgm,
    mask_to_image,
    save_pgm,
    image_to_mask,
)


class SeedingError(ValueError):
    """Seed protocol violation (empty gt, overlapping seed sets, coverage miss)."""


class PhantomError(ValueError):
    """Invalid or degenerate phantom specification."""


_ERODE_SE = np.ones((3, 3), dtype=bool)


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _centroid_line(gt: Mask) -> np.ndarray:
    """All gt pixels on the centroid row (nearest non-empty row if needed)."""
    idx = np.argwhere(gt.bits)
    row = _round_half_up(float(idx[:, 0].mean()))
    rows_with_pixels = np.unique(idx[:, 0])
    if row not in rows_with_pixels:
        row = int(rows_with_pixels[np.argmin(np.abs(rows_with_pixels - row))])
    out = np.zeros_like(gt.bits)
    out[row] = gt.bits[row]
    return out


def interior_fraction_seeds(gt: Mask, fraction: float) -> Mask:
    """Shrink ``gt`` to roughly ``fraction`` of its area as interior seeds.

    Erodes with a 3x3 square until the area drops to
    ``round(fraction * area)``.  If erosion would die out before the
    target is reached, returns the horizontal line of ``gt`` through its
    centroid row instead, so the result is never empty.
    """
    if not 0.0 < fraction <= 1.0:
        raise SeedingError(f"fraction must be in (0, 1], got {fraction}")
    area = gt.area()
    if area == 0:
        raise SeedingError("ground truth is empty")
    target = _round_half_up(fraction * area)
    cur = gt.bits
    while int(np.count_nonzero(cur)) > target:
        nxt = ndimage.binary_erosion(cur, structure=_ERODE_SE, border_value=0)
        if not nxt.any():
            return Mask(_centroid_line(gt))
        cur = nxt
    return Mask(cur)


def chebyshev_distance_to(mask: Mask) -> np.ndarray:
    """Chebyshev (chessboard) distance of every pixel to the nearest mask pixel."""
    if not mask.bits.any():
        raise SeedingError("mask is empty")
    return ndimage.distance_transform_cdt(~mask.bits, metric="chessboard").astype(np.int64)


def exterior_ring_seeds(gt: Mask, distance_px: int, thickness: int = 1) -> Mask:
    """Ring of background seeds at Chebyshev distance ``distance_px`` from ``gt``.

    Wherever the ring would fall outside the grid, the image border
    pixel takes its place (still excluding ``gt`` itself).
    """
    if distance_px < 1:
        raise SeedingError(f"distance_px must be >= 1, got {distance_px}")
    if thickness < 1:
        raise SeedingError(f"thickness must be >= 1, got {thickness}")
    if gt.area() == 0:
        raise SeedingError("ground truth is empty")
    dist = chebyshev_distance_to(gt)
    ring = (dist >= distance_px) & (dist < distance_px + thickness)
    border = np.zeros_like(gt.bits)
    border[0, :] = border[-1, :] = True
    border[:, 0] = border[:, -1] = True
    clamped = border & (dist > 0) & (dist < distance_px)
    return Mask(ring | clamped)


def sloppy_seeds(
    gt: Mask,
    interior_fraction: float = 0.5,
    exterior_distance: int = 6,
    dark: Mask | None = None,
) -> LabelMap:
    """Quick annotation: eroded interior (+1) plus an exterior ring (-1).

    When the dark sub-region of a phantom body is supplied, verifies
    that the interior seeds touch both the dark and the bright part of
    the ground truth, which is what growth needs to cope with
    non-homogeneous bodies.
    """
    interior = interior_fraction_seeds(gt, interior_fraction)
    exterior = exterior_ring_seeds(gt, exterior_distance)
    if (interior.bits & exterior.bits).any():
        raise SeedingError("interior and exterior seed sets overlap")
    if dark is not None:
        bright = gt.bits & ~dark.bits
        if dark.bits.any() and not (interior.bits & dark.bits).any():
            raise SeedingError("interior seeds miss the dark region of the body")
        if bright.any() and not (interior.bits & bright).any():
            raise SeedingError("interior seeds miss the bright region of the body")
    labels = np.zeros(gt.bits.shape, dtype=np.int8)
    labels[exterior.bits] = -1
    labels[interior.bits] = 1
    return LabelMap(labels)


# ---------------------------------------------------------------------------
# Phantoms
# ---------------------------------------------------------------------------

_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_MASK64 = (1 << 64) - 1
_TWO_NEG_53 = 2.0**-53


@dataclass(frozen=True)
class PhantomSpec:
    """Deterministic recipe for one phantom; unset geometry gets derived defaults.

    The body is a flat rounded rectangle (a collapsed vertebral body
    seen laterally).  The dark blob hugs one side of the boundary,
    where its intensity is barely above the background.  An optional
    mid-intensity shell wraps the body like the surrounding tissue
    layers; growth methods that lock their first grab tend to bleed
    into it, which is what the benchmark is designed to expose.
    """

    rows: int = 64
    cols: int = 64
    center: tuple[float, float] | None = None  # (row, col) of the body centre
    semi_axes: tuple[float, float] | None = None  # (half-height, half-width)
    corner_radius: float | None = None
    bright_mean: int = 160
    dark_mean: int = 70
    background_mean: int = 60
    noise_sigma: float = 8.0
    dark_fraction: float = 0.25
    # blob centre as fractions of the semi-axes; the default pushes the dark
    # region against the body boundary, where it is hardest to tell from the
    # background
    dark_offset: tuple[float, float] = (0.0, 0.45)
    shell_intensity: float = 110.0
    shell_thickness: int = 0  # 0 disables the shell
    rng_seed: int = 1

    def __post_init__(self):
        if self.rows < 8 or self.cols < 8:
            raise PhantomError(f"grid {self.rows}x{self.cols} too small for a phantom")
        for name in ("bright_mean", "dark_mean", "background_mean"):
            v = getattr(self, name)
            if not 0 <= v <= 255:
                raise PhantomError(f"{name}={v} outside the 8-bit range")
        if self.noise_sigma < 0:
            raise PhantomError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if not 0.0 <= self.dark_fraction < 1.0:
            raise PhantomError(f"dark_fraction must be in [0, 1), got {self.dark_fraction}")
        if not 0 <= self.shell_intensity <= 255:
            raise PhantomError(f"shell_intensity={self.shell_intensity} outside the 8-bit range")
        if self.shell_thickness < 0:
            raise PhantomError(f"shell_thickness must be >= 0, got {self.shell_thickness}")
        if self.center is None:
            object.__setattr__(self, "center", ((self.rows - 1) / 2.0, (self.cols - 1) / 2.0))
        if self.semi_axes is None:
            object.__setattr__(self, "semi_axes", (0.20 * self.rows, 0.35 * self.cols))
        if self.corner_radius is None:
            object.__setattr__(self, "corner_radius", 0.4 * min(self.semi_axes))
        a, b = self.semi_axes
        if a <= 0 or b <= 0:
            raise PhantomError(f"semi_axes must be positive, got {self.semi_axes}")
        if self.corner_radius < 0:
            raise PhantomError(f"corner_radius must be >= 0, got {self.corner_radius}")


@dataclass(frozen=True)
class PhantomCase:
    image: GrayImage
    gt: Mask
    spec: PhantomSpec
    id: str


def _body_mask(spec: PhantomSpec) -> np.ndarray:
    """Rounded-rectangle body: rectangle with quarter-circle corners."""
    ci, cj = spec.center
    a, b = spec.semi_axes
    r = min(spec.corner_radius, a, b)
    di = np.abs(np.arange(spec.rows, dtype=np.float64)[:, None] - ci)
    dj = np.abs(np.arange(spec.cols, dtype=np.float64)[None, :] - cj)
    in_rect = (di <= a) & (dj <= b)
    in_core = (di <= a - r) | (dj <= b - r)
    dx = di - (a - r)
    dy = dj - (b - r)
    in_corner = dx * dx + dy * dy <= r * r
    return in_rect & (in_core | in_corner)


def _dark_blob(spec: PhantomSpec, body: np.ndarray) -> np.ndarray:
    """The k body pixels nearest the blob centre, k = round(dark_fraction * area).

    Nearest-by-distance growth from a point inside a convex-ish body
    yields a connected blob; ties break row-major so the choice is
    deterministic.
    """
    area = int(np.count_nonzero(body))
    k = _round_half_up(spec.dark_fraction * area)
    blob = np.zeros_like(body)
    if k <= 0:
        return blob
    ci, cj = spec.center
    a, b = spec.semi_axes
    bi = ci + spec.dark_offset[0] * a
    bj = cj + spec.dark_offset[1] * b
    coords = np.argwhere(body)
    d2 = (coords[:, 0] - bi) ** 2 + (coords[:, 1] - bj) ** 2
    order = np.lexsort((coords[:, 1], coords[:, 0], d2))
    chosen = coords[order[:k]]
    blob[chosen[:, 0], chosen[:, 1]] = True
    return blob


def phantom_regions(spec: PhantomSpec) -> tuple[Mask, Mask]:
    """(body, dark blob) masks of a spec, without generating the noisy image."""
    body = _body_mask(spec)
    if not body.any():
        raise PhantomError("degenerate geometry: body mask is empty")
    return Mask(body), Mask(_dark_blob(spec, body))


@njit(cache=True)
def _noise_field(rows, cols, seed):  # pragma: no cover - compiled
    out = np.empty((rows, cols), dtype=np.float64)
    state = np.uint64(seed)
    mult = np.uint64(6364136223846793005)
    inc = np.uint64(1442695040888963407)
    shift = np.uint64(11)
    for i in range(rows):
        for j in range(cols):
            acc = 0.0
            for _ in range(12):
                state = state * mult + inc
                acc += np.float64(state >> shift) * 2.0**-53
            out[i, j] = acc - 6.0
    return out


def noise_field_python(rows: int, cols: int, seed: int) -> np.ndarray:
    """Pure-Python mirror of the compiled noise kernel; used to pin portability."""
    out = np.empty((rows, cols), dtype=np.float64)
    state = seed & _MASK64
    for i in range(rows):
        for j in range(cols):
            acc = 0.0
            for _ in range(12):
                state = (state * _LCG_MULT + _LCG_INC) & _MASK64
                acc += float(state >> 11) * _TWO_NEG_53
            out[i, j] = acc - 6.0
    return out


def generate_phantom(spec: PhantomSpec, case_id: str | None = None) -> PhantomCase:
    """Render the phantom image and its ground truth; bit-deterministic."""
    body, blob = phantom_regions(spec)
    base = np.full((spec.rows, spec.cols), float(spec.background_mean))
    base[body.bits] = float(spec.bright_mean)
    base[blob.bits] = float(spec.dark_mean)
    if spec.shell_thickness > 0:
        dist = ndimage.distance_transform_cdt(~body.bits, metric="chessboard")
        shell = (dist >= 1) & (dist <= spec.shell_thickness)
        base[shell] = float(spec.shell_intensity)
    if spec.noise_sigma > 0:
        base = base + spec.noise_sigma * _noise_field(spec.rows, spec.cols, spec.rng_seed)
    pixels = np.clip(np.floor(base + 0.5), 0, 255).astype(np.int32)
    image = GrayImage(pixels, max_representable=255)
    return PhantomCase(image=image, gt=body, spec=spec, id=case_id or f"ph{spec.rng_seed}")


# ---------------------------------------------------------------------------
# Corpus generation and on-disk layout
# ---------------------------------------------------------------------------

def _uniforms(seed: int, n: int) -> list[float]:
    state = seed & _MASK64
    out = []
    for _ in range(n):
        state = (state * _LCG_MULT + _LCG_INC) & _MASK64
        out.append(float(state >> 11) * _TWO_NEG_53)
    return out


def corpus_specs(count: int, base_seed: int, rows: int = 64, cols: int = 64) -> list[PhantomSpec]:
    """Specs for a benchmark corpus, reproducible byte for byte from ``base_seed``.

    The mix is 60% hard cases (large boundary-contact blob plus a
    tissue shell) and 40% easier smaller bodies with a modest blob.
    All geometry jitter comes from the corpus LCG, so two runs with the
    same seed produce identical corpora on any platform.
    """
    if count < 1:
        raise PhantomError(f"count must be >= 1, got {count}")
    specs = []
    for k in range(count):
        seed = base_seed + k
        u = _uniforms(seed ^ 0x9E3779B97F4A7C15, 12)
        ci = (rows - 1) / 2.0 + (u[0] - 0.5) * 0.05 * rows
        cj = (cols - 1) / 2.0 + (u[1] - 0.5) * 0.05 * cols
        hard = u[11] < 0.6
        if hard:
            a = (0.17 + 0.04 * u[2]) * rows
            b = (0.32 + 0.06 * u[3]) * cols
        else:
            a = (0.12 + 0.04 * u[2]) * rows
            b = (0.30 + 0.06 * u[3]) * cols
        r = (0.35 + 0.25 * u[4]) * min(a, b)
        side = 1.0 if u[7] < 0.5 else -1.0
        if hard:
            frac = 0.50 + 0.12 * u[5]
            offset = (0.0, side * (0.42 + 0.16 * u[6]))
            shell_intensity = 107.0 + 6.0 * u[8]
            shell_thickness = 3
        else:
            frac = 0.18 + 0.10 * u[5]
            offset = (0.0, side * (0.45 + 0.15 * u[6]))
            shell_intensity = 110.0
            shell_thickness = 0
        specs.append(
            PhantomSpec(
                rows=rows,
                cols=cols,
                center=(ci, cj),
                semi_axes=(a, b),
                corner_radius=r,
                dark_fraction=frac,
                dark_offset=offset,
                shell_intensity=shell_intensity,
                shell_thickness=shell_thickness,
                rng_seed=seed,
            )
        )
    return specs


def generate_corpus(count: int, base_seed: int, rows: int = 64, cols: int = 64) -> list[PhantomCase]:
    return [
        generate_phantom(spec, case_id=f"case{k:03d}")
        for k, spec in enumerate(corpus_specs(count, base_seed, rows, cols))
    ]


_MANIFEST_COLUMNS = (
    "id",
    "rng_seed",
    "rows",
    "cols",
    "center_i",
    "center_j",
    "semi_axis_i",
    "semi_axis_j",
    "corner_radius",
    "bright_mean",
    "dark_mean",
    "background_mean",
    "noise_sigma",
    "dark_fraction",
    "dark_offset_i",
    "dark_offset_j",
    "shell_intensity",
    "shell_thickness",
)


def save_corpus(
    cases: list[PhantomCase],
    outdir: str | Path,
    interior_fraction: float = 0.5,
    exterior_distance: int = 6,
) -> Path:
    """Write a corpus directory: image/gt/seeds PGMs per case plus manifest.csv.

    Seeds use the default sloppy protocol and are checked to cover both
    the dark and bright body regions.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    lines = [",".join(_MANIFEST_COLUMNS)]
    for case in cases:
        _, dark = phantom_regions(case.spec)
        seeds = sloppy_seeds(case.gt, interior_fraction, exterior_distance, dark=dark)
        save_pgm(case.image, out / f"case_{case.id}_img.pgm")
        save_pgm(mask_to_image(case.gt), out / f"case_{case.id}_gt.pgm")
        save_pgm(encode_labelmap(seeds), out / f"case_{case.id}_seeds.pgm")
        s = case.spec
        lines.append(
            ",".join(
                [
                    case.id,
                    str(s.rng_seed),
                    str(s.rows),
                    str(s.cols),
                    repr(s.center[0]),
                    repr(s.center[1]),
                    repr(s.semi_axes[0]),
                    repr(s.semi_axes[1]),
                    repr(s.corner_radius),
                    str(s.bright_mean),
                    str(s.dark_mean),
                    str(s.background_mean),
                    repr(s.noise_sigma),
                    repr(s.dark_fraction),
                    repr(s.dark_offset[0]),
                    repr(s.dark_offset[1]),
                    repr(s.shell_intensity),
                    str(s.shell_thickness),
                ]
            )
        )
    manifest = out / "manifest.csv"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


def load_corpus(directory: str | Path) -> list[PhantomCase]:
    """Read a corpus directory written by :func:`save_corpus`."""
    root = Path(directory)
    manifest = root / "manifest.csv"
    if not manifest.is_file():
        raise FileNotFoundError(f"no manifest.csv in {root}")
    text = manifest.read_text(encoding="utf-8").strip().splitlines()
    header = text[0].split(",")
    if tuple(header) != _MANIFEST_COLUMNS:
        raise ValueError(f"unexpected manifest columns in {manifest}")
    cases = []
    for line in text[1:]:
        f = line.split(",")
        row = dict(zip(_MANIFEST_COLUMNS, f))
        spec = PhantomSpec(
            rows=int(row["rows"]),
            cols=int(row["cols"]),
            center=(float(row["center_i"]), float(row["center_j"])),
            semi_axes=(float(row["semi_axis_i"]), float(row["semi_axis_j"])),
            corner_radius=float(row["corner_radius"]),
            bright_mean=int(row["bright_mean"]),
            dark_mean=int(row["dark_mean"]),
            background_mean=int(row["background_mean"]),
            noise_sigma=float(row["noise_sigma"]),
            dark_fraction=float(row["dark_fraction"]),
            dark_offset=(float(row["dark_offset_i"]), float(row["dark_offset_j"])),
            shell_intensity=float(row["shell_intensity"]),
            shell_thickness=int(row["shell_thickness"]),
            rng_seed=int(row["rng_seed"]),
        )
        case_id = row["id"]
        image = load_pgm(root / f"case_{case_id}_img.pgm")
        gt = image_to_mask(load_pgm(root / f"case_{case_id}_gt.pgm"))
        cases.append(PhantomCase(image=image, gt=gt, spec=spec, id=case_id))
    return cases
