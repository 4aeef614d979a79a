"""Balanced-growth segmentation engine.

Growth proceeds in full-grid passes.  A pass scans pixels row-major;
each pixel consults its eight neighbours in the fixed order N, NE, E,
SE, S, SW, W, NW and may be conquered several times within the same
visit, always against its freshest weight (single-buffer, in-place
semantics).  A neighbour attacks with strength

    s = w_neighbour * (1 - |intensity difference| / image maximum)

and wins only if ``s`` strictly exceeds the pixel's current weight.
The conquered pixel takes the neighbour's label and its weight becomes
the 0.5/0.5 blend of old weight and attack strength, which is what
keeps borders smooth across weak intensity transitions.

The compiled kernel below and :mod:`bgrowth.reference` implement the
same procedure and must stay bit-identical; change them in lockstep.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ._kernels import sweep as _sweep
from .grid import GrayImage, LabelMap, WeightMap, same_shape


class EngineError(ValueError):
    """Invalid segmentation input (dimension mismatch, missing seeds)."""


@dataclass(frozen=True)
class BGrowthParams:
    """Knobs for a balanced-growth run.

    ``weight_epsilon`` defines what counts as a change for early
    stopping: a pass that flips no label and moves no weight by more
    than epsilon ends the run.  ``trace_stride`` thins the per-iteration
    label snapshots when ``capture_trace`` is on.
    """

    max_iters: int = 30
    weight_epsilon: float = 1e-9
    capture_trace: bool = False
    trace_stride: int = 1

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0.0 <= self.weight_epsilon < 1.0:
            raise ValueError(f"weight_epsilon must be in [0, 1), got {self.weight_epsilon}")
        if self.trace_stride < 1:
            raise ValueError(f"trace_stride must be >= 1, got {self.trace_stride}")


@dataclass(frozen=True)
class SegmentationResult:
    labels: LabelMap
    weights: WeightMap
    iterations_run: int
    converged: bool
    trace: list[tuple[int, LabelMap]] | None = None
    elapsed: float = 0.0
    # (min, max) weight observed immediately after each conquest; None if
    # nothing was conquered.  Diagnostic only, used by the property suite.
    conquest_weight_range: tuple[float, float] | None = field(default=None, compare=False)

    def foreground(self):
        from .grid import Mask

        return Mask(self.labels.labels == 1)


def init_weights(seeds: LabelMap) -> WeightMap:
    """Seeded pixels start fully confident (1.0), everything else at 0."""
    return WeightMap(np.where(seeds.labels != 0, 1.0, 0.0))


def strength_factor(w_neighbor: float, i_cur: int, i_neighbor: int, i_max: int) -> float:
    """Attack strength of a neighbour: its weight scaled by intensity similarity.

    ``i_max`` is the global image maximum; an all-zero image uses 1 as
    the denominator so the function stays total.
    """
    if not 0.0 <= w_neighbor <= 1.0:
        raise ValueError(f"neighbour weight {w_neighbor} outside [0, 1]")
    denom = i_max if i_max > 0 else 1
    return w_neighbor * (1.0 - abs(i_cur - i_neighbor) / denom)


NEIGHBOR_OFFSETS = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))


def _run_engine(
    image: GrayImage,
    seeds: LabelMap,
    *,
    max_iters: int,
    weight_epsilon: float,
    capture_trace: bool,
    trace_stride: int,
    balanced: bool,
) -> SegmentationResult:
    if not same_shape(image, seeds):
        raise EngineError(
            f"dimension mismatch: image {image.rows}x{image.cols} vs seeds {seeds.rows}x{seeds.cols}"
        )
    if seeds.seed_count() == 0:
        raise EngineError("no seeds provided")

    fimg = image.pixels.astype(np.float64)
    labels = seeds.labels.astype(np.int8)
    weights = np.where(labels != 0, 1.0, 0.0)
    imax = image.max_value
    inv_imax = 1.0 / float(imax if imax > 0 else 1)

    trace: list[tuple[int, LabelMap]] | None = [] if capture_trace else None
    converged = False
    iterations = 0
    wmin_all = 2.0
    wmax_all = -1.0
    any_conquest = False

    start = time.perf_counter()
    for k in range(1, max_iters + 1):
        label_changed, weight_moved, conquered, wmin, wmax = _sweep(
            fimg, labels, weights, inv_imax, weight_epsilon, balanced
        )
        iterations = k
        if conquered:
            any_conquest = True
            wmin_all = min(wmin_all, wmin)
            wmax_all = max(wmax_all, wmax)
        if trace is not None and (k - 1) % trace_stride == 0:
            trace.append((k, LabelMap(labels.copy())))
        if not label_changed and not weight_moved:
            converged = True
            break
    elapsed = time.perf_counter() - start

    if trace is not None and (not trace or trace[-1][0] != iterations):
        trace.append((iterations, LabelMap(labels.copy())))

    return SegmentationResult(
        labels=LabelMap(labels),
        weights=WeightMap(weights),
        iterations_run=iterations,
        converged=converged,
        trace=trace,
        elapsed=elapsed,
        conquest_weight_range=(wmin_all, wmax_all) if any_conquest else None,
    )


def run_bgrowth(image: GrayImage, seeds: LabelMap, params: BGrowthParams | None = None) -> SegmentationResult:
    """Segment ``image`` from scribble ``seeds`` with the balanced update rule."""
    p = params or BGrowthParams()
    return _run_engine(
        image,
        seeds,
        max_iters=p.max_iters,
        weight_epsilon=p.weight_epsilon,
        capture_trace=p.capture_trace,
        trace_stride=p.trace_stride,
        balanced=True,
    )


def warmup() -> None:
    """Trigger JIT compilation of the sweep kernel on a tiny input."""
    img = GrayImage(np.array([[0, 1], [1, 0]], dtype=np.int32), max_representable=255)
    seeds = LabelMap(np.array([[1, 0], [0, -1]], dtype=np.int8))
    run_bgrowth(img, seeds, BGrowthParams(max_iters=2))
