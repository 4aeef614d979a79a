"""Overlap and confusion-matrix measures for binary segmentations.

Degenerate cases follow the conventions: Jaccard and Dice of two empty
masks are 1, precision is 1 when nothing was predicted, recall is 1
when there was nothing to find, and the F-measure is 0 when both
precision and recall vanish.  These make a perfectly empty agreement
score as a perfect result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Mask, same_shape


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricsRow:
    """The six comparison measures for one (method, case) pair."""

    accuracy: float
    jaccard: float
    dice: float
    precision: float
    recall: float
    f_measure: float
    method: str
    case_id: str
    elapsed: float

    def measures(self) -> dict[str, float]:
        return {
            "accuracy": self.accuracy,
            "jaccard": self.jaccard,
            "dice": self.dice,
            "precision": self.precision,
            "recall": self.recall,
            "f_measure": self.f_measure,
        }


def _check_pair(gt: Mask, seg: Mask) -> None:
    if not same_shape(gt, seg):
        raise ValueError(
            f"dimension mismatch: gt {gt.rows}x{gt.cols} vs seg {seg.rows}x{seg.cols}"
        )


def confusion(gt: Mask, seg: Mask) -> ConfusionCounts:
    """Per-pixel tally of the segmentation against the ground truth."""
    _check_pair(gt, seg)
    g = gt.bits
    s = seg.bits
    tp = int(np.count_nonzero(g & s))
    fp = int(np.count_nonzero(~g & s))
    fn = int(np.count_nonzero(g & ~s))
    tn = int(np.count_nonzero(~g & ~s))
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def jaccard(gt: Mask, seg: Mask) -> float:
    _check_pair(gt, seg)
    inter = int(np.count_nonzero(gt.bits & seg.bits))
    union = int(np.count_nonzero(gt.bits | seg.bits))
    if union == 0:
        return 1.0
    return inter / union


def dice(gt: Mask, seg: Mask) -> float:
    _check_pair(gt, seg)
    inter = int(np.count_nonzero(gt.bits & seg.bits))
    size_sum = gt.area() + seg.area()
    if size_sum == 0:
        return 1.0
    return 2.0 * inter / size_sum


def accuracy(c: ConfusionCounts) -> float:
    return (c.tp + c.tn) / c.total


def precision(c: ConfusionCounts) -> float:
    denom = c.tp + c.fp
    if denom == 0:
        return 1.0
    return c.tp / denom


def recall(c: ConfusionCounts) -> float:
    denom = c.tp + c.fn
    if denom == 0:
        return 1.0
    return c.tp / denom


def f_measure(p: float, r: float) -> float:
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)


def score_masks(gt: Mask, seg: Mask, method: str = "", case_id: str = "", elapsed: float = 0.0) -> MetricsRow:
    """All six measures for one mask pair, bundled into a row."""
    c = confusion(gt, seg)
    p = precision(c)
    r = recall(c)
    return MetricsRow(
        accuracy=accuracy(c),
        jaccard=jaccard(gt, seg),
        dice=dice(gt, seg),
        precision=p,
        recall=r,
        f_measure=f_measure(p, r),
        method=method,
        case_id=case_id,
        elapsed=elapsed,
    )
