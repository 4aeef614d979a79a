import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgrowth.grid import Mask
from bgrowth.metrics import (
    ConfusionCounts,
    accuracy,
    confusion,
    dice,
    f_measure,
    jaccard,
    precision,
    recall,
    score_masks,
)


def mask(rows_2d):
    return Mask(np.asarray(rows_2d, dtype=bool))


@pytest.fixture
def three_overlap_pair():
    """gt has 4 pixels, seg has 6, they overlap on 3, grid is 4x4."""
    gt = np.zeros((4, 4), dtype=bool)
    gt[0, 0:4] = True
    seg = np.zeros((4, 4), dtype=bool)
    seg[0, 1:4] = True
    seg[1, 0:3] = True
    return Mask(gt), Mask(seg)


def test_confusion_identity():
    gt = np.zeros((3, 3), dtype=bool)
    gt[0, :3] = True
    gt[1, 0] = True
    c = confusion(Mask(gt), Mask(gt))
    assert (c.tp, c.tn, c.fp, c.fn) == (4, 5, 0, 0)
    assert c.total == 9


def test_confusion_three_overlap(three_overlap_pair):
    gt, seg = three_overlap_pair
    c = confusion(gt, seg)
    assert (c.tp, c.fp, c.fn, c.tn) == (3, 3, 1, 9)


def test_confusion_disjoint():
    a = mask([[True, False]])
    b = mask([[False, True]])
    assert confusion(a, b).tp == 0


def test_confusion_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        confusion(mask([[True]]), mask([[True, False]]))


def test_jaccard_dice_identical_masks():
    m = mask([[True, False], [True, True]])
    assert jaccard(m, m) == 1.0
    assert dice(m, m) == 1.0


def test_jaccard_dice_three_overlap(three_overlap_pair):
    gt, seg = three_overlap_pair
    assert jaccard(gt, seg) == 3 / 7
    assert dice(gt, seg) == 0.6


def test_empty_masks_convention():
    e = Mask(np.zeros((2, 2), dtype=bool))
    assert jaccard(e, e) == 1.0
    assert dice(e, e) == 1.0


def test_derived_measures_three_overlap(three_overlap_pair):
    gt, seg = three_overlap_pair
    c = confusion(gt, seg)
    assert accuracy(c) == 12 / 16 == 0.75
    assert precision(c) == 0.5
    assert recall(c) == 0.75
    assert f_measure(precision(c), recall(c)) == 0.6


def test_perfect_segmentation_all_ones():
    m = mask([[True, False], [False, True]])
    row = score_masks(m, m)
    assert (row.accuracy, row.precision, row.recall, row.f_measure) == (1, 1, 1, 1)
    assert (row.jaccard, row.dice) == (1, 1)


def test_conventions_on_degenerate_counts():
    c = ConfusionCounts(tp=0, fp=0, tn=4, fn=0)
    assert precision(c) == 1.0
    assert recall(c) == 1.0
    assert f_measure(precision(c), recall(c)) == 1.0
    assert f_measure(0.0, 0.0) == 0.0


@st.composite
def mask_pairs(draw):
    rows = draw(st.integers(1, 8))
    cols = draw(st.integers(1, 8))
    a = draw(st.lists(st.booleans(), min_size=rows * cols, max_size=rows * cols))
    b = draw(st.lists(st.booleans(), min_size=rows * cols, max_size=rows * cols))
    return (
        Mask(np.array(a).reshape(rows, cols)),
        Mask(np.array(b).reshape(rows, cols)),
    )


@settings(max_examples=200, deadline=None)
@given(mask_pairs())
def test_dice_jaccard_identity_property(pair):
    gt, seg = pair
    j = jaccard(gt, seg)
    d = dice(gt, seg)
    assert abs(d - 2 * j / (1 + j)) < 1e-12
    assert abs(j - d / (2 - d)) < 1e-12
    assert 0.0 <= j <= d <= 1.0


@settings(max_examples=200, deadline=None)
@given(mask_pairs())
def test_counts_path_equals_set_path(pair):
    """Metrics from confusion counts match direct set-operation formulas."""
    gt, seg = pair
    c = confusion(gt, seg)
    g = gt.bits
    s = seg.bits
    inter = int(np.count_nonzero(g & s))
    union = int(np.count_nonzero(g | s))
    assert jaccard(gt, seg) == (inter / union if union else 1.0)
    assert accuracy(c) == int(np.count_nonzero(g == s)) / g.size
    pred = int(np.count_nonzero(s))
    act = int(np.count_nonzero(g))
    assert precision(c) == (inter / pred if pred else 1.0)
    assert recall(c) == (inter / act if act else 1.0)


def test_confusion_total_invariant():
    rng = np.random.default_rng(5)
    for _ in range(20):
        rows, cols = rng.integers(1, 10, size=2)
        gt = Mask(rng.random((rows, cols)) < 0.4)
        seg = Mask(rng.random((rows, cols)) < 0.4)
        assert confusion(gt, seg).total == rows * cols
