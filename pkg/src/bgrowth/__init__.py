"""Balanced-growth seeded segmentation and its evaluation ecosystem."""

from .baselines import GrowCutParams, otsu_segment, otsu_threshold, run_growcut
from .engine import (
    BGrowthParams,
    EngineError,
    SegmentationResult,
    init_weights,
    run_bgrowth,
    strength_factor,
)
from .grid import (
    GrayImage,
    LabelMap,
    Mask,
    PgmFormatError,
    SeedEncodingError,
    WeightMap,
    decode_labelmap,
    encode_labelmap,
    load_pgm,
    save_pgm,
)
from .metrics import ConfusionCounts, MetricsRow, confusion, dice, jaccard, score_masks
from .seedgen import (
    PhantomCase,
    PhantomSpec,
    exterior_ring_seeds,
    generate_corpus,
    generate_phantom,
    interior_fraction_seeds,
    sloppy_seeds,
)
from .stats import RankSumResult, wilcoxon_ranksum

__version__ = "0.1.0"

__all__ = [
    "BGrowthParams",
    "ConfusionCounts",
    "EngineError",
    "GrayImage",
    "GrowCutParams",
    "LabelMap",
    "Mask",
    "MetricsRow",
    "PgmFormatError",
    "PhantomCase",
    "PhantomSpec",
    "RankSumResult",
    "SeedEncodingError",
    "SegmentationResult",
    "WeightMap",
    "confusion",
    "decode_labelmap",
    "dice",
    "encode_labelmap",
    "exterior_ring_seeds",
    "generate_corpus",
    "generate_phantom",
    "init_weights",
    "interior_fraction_seeds",
    "jaccard",
    "load_pgm",
    "otsu_segment",
    "otsu_threshold",
    "run_bgrowth",
    "run_growcut",
    "save_pgm",
    "score_masks",
    "sloppy_seeds",
    "strength_factor",
    "wilcoxon_ranksum",
    "__version__",
]
