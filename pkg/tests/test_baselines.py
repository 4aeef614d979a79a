from fractions import Fraction

import numpy as np
import pytest

from bgrowth.baselines import GrowCutParams, otsu_segment, otsu_threshold, run_growcut
from bgrowth.engine import BGrowthParams, run_bgrowth
from bgrowth.grid import GrayImage, LabelMap
from bgrowth.reference import max_contrast_reference

from test_engine import (
    GOLDEN_1X5_IMAGE,
    blob_image,
    component_consistent_seeds,
    golden_1x5_seeds,
    gray,
    random_case,
)

# frozen from the reference interpreter with the overwrite rule
GOLDEN_1X5_GC_LABELS = [-1, -1, 1, 1, 1]
GOLDEN_1X5_GC_WEIGHTS = [1.0, 1.0, 0.6, 1.0, 1.0]


def test_growcut_golden_1x5():
    res = run_growcut(gray(GOLDEN_1X5_IMAGE), golden_1x5_seeds(), GrowCutParams(max_iters=30))
    assert res.labels.labels.ravel().tolist() == GOLDEN_1X5_GC_LABELS
    assert res.weights.weights.ravel().tolist() == GOLDEN_1X5_GC_WEIGHTS
    assert res.converged and res.iterations_run == 3


def test_growcut_weights_differ_from_balanced():
    img = gray(GOLDEN_1X5_IMAGE)
    bg = run_bgrowth(img, golden_1x5_seeds(), BGrowthParams(max_iters=30))
    gc = run_growcut(img, golden_1x5_seeds(), GrowCutParams(max_iters=30))
    assert bg.labels == gc.labels
    assert not np.array_equal(bg.weights.weights, gc.weights.weights)


def test_growcut_uniform_matches_bgrowth():
    img = gray(np.full((3, 3), 7))
    s = np.zeros((3, 3), dtype=np.int8)
    s[1, 1] = 1
    bg = run_bgrowth(img, LabelMap(s))
    gc = run_growcut(img, LabelMap(s))
    assert bg.labels == gc.labels
    assert (gc.labels.labels == 1).all()


def test_growcut_max_contrast_1x6():
    img = gray([[0, 0, 0, 255, 255, 255]])
    s = np.zeros((1, 6), dtype=np.int8)
    s[0, 1] = -1
    s[0, 4] = 1
    res = run_growcut(img, LabelMap(s))
    assert res.labels.labels.ravel().tolist() == [-1, -1, -1, 1, 1, 1]


def test_growcut_shares_engine_invariants():
    rng = np.random.default_rng(31)
    for _ in range(50):
        img, seeds = random_case(rng, 24, 24)
        res = run_growcut(img, seeds, GrowCutParams(max_iters=30))
        mask = seeds.labels != 0
        assert np.array_equal(res.labels.labels[mask], seeds.labels[mask])
        assert res.weights.weights.min() >= 0.0 and res.weights.weights.max() <= 1.0
        if res.conquest_weight_range is not None:
            lo, hi = res.conquest_weight_range
            assert 0.0 <= lo <= hi <= 1.0
        assert res.iterations_run <= 30


def test_growcut_flood_fill_equivalence():
    rng = np.random.default_rng(37)
    for _ in range(15):
        img = blob_image(rng, 20, 20)
        seeds = component_consistent_seeds(rng, img)
        if seeds.seed_count() == 0:
            continue
        oracle = max_contrast_reference(img, seeds)
        res = run_growcut(img, seeds, GrowCutParams(max_iters=40))
        assert res.labels == oracle


# ---------------------------------------------------------------------------
# Otsu
# ---------------------------------------------------------------------------

def otsu_bruteforce(hist):
    """Exhaustive scan over all 256 thresholds in exact rational arithmetic."""
    total = sum(hist)
    best_t = -1
    best_var = Fraction(-1)
    for t in range(256):
        w0 = sum(hist[: t + 1])
        if w0 == 0:
            continue
        w1 = total - w0
        if best_t < 0:
            best_t = t
            best_var = Fraction(0)
        if w1 == 0:
            continue
        mu0 = Fraction(sum(v * h for v, h in enumerate(hist[: t + 1])), w0)
        mu1 = Fraction(sum(v * h for v, h in enumerate(hist) if v > t), w1)
        var = w0 * w1 * (mu0 - mu1) ** 2
        if var > best_var:
            best_var = var
            best_t = t
    return best_t


def image_from_hist(hist):
    vals = []
    for v, h in enumerate(hist):
        vals.extend([v] * h)
    arr = np.array(vals, dtype=np.int32).reshape(1, -1)
    return GrayImage(arr)


def test_otsu_constant_image():
    img = gray(np.full((4, 4), 99))
    assert otsu_threshold(img) == 99
    assert otsu_segment(img).area() == 0


def test_otsu_bimodal_smallest_tie():
    hist = [0] * 256
    hist[0] = 50
    hist[255] = 50
    assert otsu_threshold(image_from_hist(hist)) == 0


def test_otsu_three_bin_histogram_matches_bruteforce():
    hist = [0] * 256
    hist[0] = 10
    hist[100] = 10
    hist[101] = 10
    img = image_from_hist(hist)
    expected = otsu_bruteforce(hist)
    assert expected == 0  # the 0-vs-{100,101} split maximises the variance
    assert otsu_threshold(img) == expected


def test_otsu_random_images_match_bruteforce():
    rng = np.random.default_rng(41)
    for _ in range(25):
        img = GrayImage(rng.integers(0, 256, size=(16, 16)).astype(np.int32))
        hist = np.bincount(img.pixels.ravel(), minlength=256).tolist()
        assert otsu_threshold(img) == otsu_bruteforce(hist)


def test_otsu_segment_matches_bruteforce_mask():
    rng = np.random.default_rng(43)
    img = GrayImage(rng.integers(0, 256, size=(16, 16)).astype(np.int32))
    hist = np.bincount(img.pixels.ravel(), minlength=256).tolist()
    t = otsu_bruteforce(hist)
    assert np.array_equal(otsu_segment(img).bits, img.pixels > t)


def test_otsu_bimodal_mask_selects_bright():
    img = gray([[0, 255, 0], [255, 0, 255]])
    assert otsu_segment(img).bits.tolist() == [[False, True, False], [True, False, True]]


def test_otsu_16bit_uses_shifted_bins():
    arr = np.array([[0, 65535], [0, 65535]], dtype=np.int32)
    img = GrayImage(arr, max_representable=65535)
    t = otsu_threshold(img)
    assert 0 <= t <= 255
    seg = otsu_segment(img)
    assert seg.bits.tolist() == [[False, True], [False, True]]


def test_growcut_params_validation():
    with pytest.raises(ValueError):
        GrowCutParams(max_iters=0)
    with pytest.raises(ValueError):
        GrowCutParams(weight_epsilon=-0.1)
