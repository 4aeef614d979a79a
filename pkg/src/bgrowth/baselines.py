"""Comparison methods: classic GrowCut and Otsu thresholding.

GrowCut shares the scan, neighbour order and stopping rule of the
balanced engine; the only difference is the conquest assignment, which
overwrites the weight with the attack strength instead of blending.
Keeping everything else identical makes benchmark deltas attributable
to the weight-update rule alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import SegmentationResult, _run_engine
from .grid import GrayImage, LabelMap, Mask


@dataclass(frozen=True)
class GrowCutParams:
    """GrowCut run parameters; stopping knobs mirror the balanced engine."""

    max_iters: int = 30
    capture_trace: bool = False
    weight_epsilon: float = 1e-9
    trace_stride: int = 1

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0.0 <= self.weight_epsilon < 1.0:
            raise ValueError(f"weight_epsilon must be in [0, 1), got {self.weight_epsilon}")
        if self.trace_stride < 1:
            raise ValueError(f"trace_stride must be >= 1, got {self.trace_stride}")


def run_growcut(image: GrayImage, seeds: LabelMap, params: GrowCutParams | None = None) -> SegmentationResult:
    """Segment ``image`` from scribble ``seeds`` with the overwrite update rule."""
    p = params or GrowCutParams()
    return _run_engine(
        image,
        seeds,
        max_iters=p.max_iters,
        weight_epsilon=p.weight_epsilon,
        capture_trace=p.capture_trace,
        trace_stride=p.trace_stride,
        balanced=False,
    )


# ---------------------------------------------------------------------------
# Otsu threshold on a 256-bin histogram
# ---------------------------------------------------------------------------

def _bin_shift(max_representable: int) -> int:
    """Right shift that maps intensities into 256 bins (0 for 8-bit images)."""
    shift = 0
    top = max_representable
    while top > 255:
        top >>= 1
        shift += 1
    return shift


def otsu_threshold(image: GrayImage) -> int:
    """Threshold (bin index) maximising the between-class variance.

    The variance comparison runs in exact integer arithmetic, so the
    choice never depends on floating-point rounding.  Only thresholds
    whose lower class is non-empty are candidates; ties take the
    smallest threshold.  For wider-than-8-bit images the histogram is
    built over right-shifted intensities and the returned threshold
    lives in that shifted domain.
    """
    shift = _bin_shift(image.max_representable)
    values = image.pixels >> shift if shift else image.pixels
    hist = np.bincount(values.ravel(), minlength=256)

    total = int(hist.sum())
    total_sum = int(np.dot(np.arange(256), hist))

    best_t = -1
    best_num_sq = 0  # (s0*w1 - s1*w0)^2 for the best candidate
    best_den = 1  # w0*w1 for the best candidate
    w0 = 0
    s0 = 0
    for t in range(256):
        w0 += int(hist[t])
        if w0 == 0:
            continue
        s0 += t * int(hist[t])
        if best_t < 0:
            best_t = t  # first candidate: lower class just became non-empty
        w1 = total - w0
        if w1 == 0:
            continue  # between-class variance is zero; never beats a positive one
        s1 = total_sum - s0
        num = s0 * w1 - s1 * w0
        num_sq = num * num
        den = w0 * w1
        # compare num_sq/den > best_num_sq/best_den without division
        if num_sq * best_den > best_num_sq * den:
            best_t = t
            best_num_sq = num_sq
            best_den = den
    return best_t


def otsu_segment(image: GrayImage) -> Mask:
    """Foreground = pixels strictly brighter than the Otsu threshold."""
    shift = _bin_shift(image.max_representable)
    values = image.pixels >> shift if shift else image.pixels
    return Mask(values > otsu_threshold(image))
