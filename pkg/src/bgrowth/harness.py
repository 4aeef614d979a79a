"""Batch experiment driver: evaluate methods over corpora, sweep the
annotation protocols, aggregate, and serialize everything as CSV.

Every measure is rounded to six decimals the moment a record is
created, and aggregates are computed from those rounded values.  That
makes re-ingesting a written CSV reproduce the aggregate file bit for
bit, which is what the golden-file tests pin.  Wall-clock columns are
the one intentional exception to reproducibility.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .baselines import GrowCutParams, otsu_segment, run_growcut
from .engine import BGrowthParams, run_bgrowth
from .grid import GrayImage, LabelMap, Mask
from .metrics import MetricsRow, score_masks
from .seedgen import PhantomCase, sloppy_seeds
from .stats import RankSumResult, wilcoxon_ranksum

METHODS = ("bgrowth", "growcut", "otsu")

CSV_COLUMNS = (
    "case_id",
    "method",
    "axis",
    "axis_value",
    "accuracy",
    "jaccard",
    "dice",
    "precision",
    "recall",
    "f_measure",
    "elapsed_s",
    "iterations",
    "converged",
)

AGGREGATE_COLUMNS = (
    "method",
    "axis",
    "axis_value",
    "n_cases",
    "mean_jaccard",
    "std_jaccard",
    "mean_accuracy",
    "mean_dice",
    "mean_precision",
    "mean_recall",
    "mean_f_measure",
)


def _round6(x: float) -> float:
    return float(f"{x:.6f}")


@dataclass(frozen=True)
class EvalRecord:
    """One CSV row: a metrics row plus run bookkeeping."""

    row: MetricsRow
    axis: str = "none"
    axis_value: float = 0.0
    iterations: int = 0
    converged: bool = True

    @property
    def method(self) -> str:
        return self.row.method

    @property
    def case_id(self) -> str:
        return self.row.case_id


@dataclass(frozen=True)
class AggregateRow:
    method: str
    axis: str
    axis_value: float
    n_cases: int
    mean_jaccard: float
    std_jaccard: float
    mean_accuracy: float
    mean_dice: float
    mean_precision: float
    mean_recall: float
    mean_f_measure: float


@dataclass(frozen=True)
class SweepSpec:
    """One annotation-variation axis with the other axis held fixed."""

    axis: str
    values: tuple[float, ...]
    fixed: float

    def __post_init__(self):
        if self.axis not in ("interior_fraction", "exterior_distance"):
            raise ValueError(f"unknown sweep axis {self.axis!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.axis == "interior_fraction":
            if not all(0.0 < v <= 1.0 for v in self.values):
                raise ValueError("interior fractions must lie in (0, 1]")
            if self.fixed < 1:
                raise ValueError("fixed exterior distance must be >= 1")
        else:
            if not all(v >= 1 for v in self.values):
                raise ValueError("exterior distances must be >= 1")
            if not 0.0 < self.fixed <= 1.0:
                raise ValueError("fixed interior fraction must lie in (0, 1]")


def interior_sweep(values: tuple[float, ...] | None = None, fixed_exterior: int = 6) -> SweepSpec:
    """Default interior protocol: 10% steps up to the full ground truth."""
    if values is None:
        values = tuple(round(0.1 * k, 1) for k in range(1, 11))
    return SweepSpec(axis="interior_fraction", values=tuple(values), fixed=float(fixed_exterior))


def exterior_sweep(values: tuple[float, ...] | None = None, fixed_interior: float = 0.5) -> SweepSpec:
    """Default exterior protocol: ring distance 3 to 30 in steps of 3."""
    if values is None:
        values = tuple(float(3 * k) for k in range(1, 11))
    return SweepSpec(axis="exterior_distance", values=tuple(values), fixed=fixed_interior)


def run_case(
    method: str,
    image: GrayImage,
    gt: Mask,
    seeds: LabelMap | None = None,
    params: BGrowthParams | GrowCutParams | None = None,
    case_id: str = "case",
    axis: str = "none",
    axis_value: float = 0.0,
) -> EvalRecord:
    """Run one method on one case; the timer wraps only the engine call."""
    if method == "bgrowth":
        start = time.perf_counter()
        res = run_bgrowth(image, seeds, params if isinstance(params, BGrowthParams) else None)
        elapsed = time.perf_counter() - start
        seg = res.foreground()
        iterations, converged = res.iterations_run, res.converged
    elif method == "growcut":
        start = time.perf_counter()
        res = run_growcut(image, seeds, params if isinstance(params, GrowCutParams) else None)
        elapsed = time.perf_counter() - start
        seg = res.foreground()
        iterations, converged = res.iterations_run, res.converged
    elif method == "otsu":
        start = time.perf_counter()
        seg = otsu_segment(image)
        elapsed = time.perf_counter() - start
        iterations, converged = 0, True
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")

    raw = score_masks(gt, seg, method=method, case_id=case_id, elapsed=elapsed)
    row = MetricsRow(
        accuracy=_round6(raw.accuracy),
        jaccard=_round6(raw.jaccard),
        dice=_round6(raw.dice),
        precision=_round6(raw.precision),
        recall=_round6(raw.recall),
        f_measure=_round6(raw.f_measure),
        method=method,
        case_id=case_id,
        elapsed=_round6(elapsed),
    )
    return EvalRecord(row=row, axis=axis, axis_value=axis_value, iterations=iterations, converged=converged)


def evaluate_case(
    method: str,
    image: GrayImage,
    gt: Mask,
    seeds: LabelMap | None = None,
    params: BGrowthParams | GrowCutParams | None = None,
    case_id: str = "case",
) -> MetricsRow:
    return run_case(method, image, gt, seeds, params, case_id).row


def run_sweep(
    corpus: list[PhantomCase],
    sweep: SweepSpec,
    methods: tuple[str, ...] = ("bgrowth", "growcut"),
) -> tuple[list[EvalRecord], list[AggregateRow]]:
    """Regenerate seeds per axis value, evaluate every method, aggregate."""
    if not corpus:
        raise ValueError("corpus is empty")
    records = []
    for value in sweep.values:
        for case in corpus:
            if sweep.axis == "interior_fraction":
                seeds = sloppy_seeds(case.gt, interior_fraction=value, exterior_distance=int(sweep.fixed))
            else:
                seeds = sloppy_seeds(case.gt, interior_fraction=sweep.fixed, exterior_distance=int(value))
            for method in methods:
                records.append(
                    run_case(
                        method,
                        case.image,
                        case.gt,
                        seeds,
                        case_id=case.id,
                        axis=sweep.axis,
                        axis_value=value,
                    )
                )
    return records, aggregate_records(records)


def aggregate_records(records: list[EvalRecord]) -> list[AggregateRow]:
    """Mean/std per (method, axis, axis_value), computed from the rounded values."""
    groups: dict[tuple[str, str, float], list[EvalRecord]] = {}
    for rec in records:
        groups.setdefault((rec.method, rec.axis, rec.axis_value), []).append(rec)
    out = []
    for (method, axis, value) in sorted(groups, key=lambda k: (k[1], k[2], k[0])):
        rows = [r.row for r in sorted(groups[(method, axis, value)], key=lambda r: r.case_id)]
        j = np.array([r.jaccard for r in rows])
        out.append(
            AggregateRow(
                method=method,
                axis=axis,
                axis_value=value,
                n_cases=len(rows),
                mean_jaccard=_round6(float(j.mean())),
                std_jaccard=_round6(float(j.std())),
                mean_accuracy=_round6(float(np.mean([r.accuracy for r in rows]))),
                mean_dice=_round6(float(np.mean([r.dice for r in rows]))),
                mean_precision=_round6(float(np.mean([r.precision for r in rows]))),
                mean_recall=_round6(float(np.mean([r.recall for r in rows]))),
                mean_f_measure=_round6(float(np.mean([r.f_measure for r in rows]))),
            )
        )
    return out


# ---------------------------------------------------------------------------
# CSV in/out (hand-rolled: fixed column set, no quoting needed, '\n' endings)
# ---------------------------------------------------------------------------

def _record_line(rec: EvalRecord) -> str:
    r = rec.row
    return ",".join(
        [
            r.case_id,
            r.method,
            rec.axis,
            f"{rec.axis_value:.6f}",
            f"{r.accuracy:.6f}",
            f"{r.jaccard:.6f}",
            f"{r.dice:.6f}",
            f"{r.precision:.6f}",
            f"{r.recall:.6f}",
            f"{r.f_measure:.6f}",
            f"{r.elapsed:.6f}",
            str(rec.iterations),
            "true" if rec.converged else "false",
        ]
    )


def export_csv(records: list[EvalRecord], path: str | Path) -> Path:
    """Per-case rows, sorted by (axis, axis_value, case_id, method)."""
    ordered = sorted(records, key=lambda r: (r.axis, r.axis_value, r.case_id, r.method))
    lines = [",".join(CSV_COLUMNS)] + [_record_line(r) for r in ordered]
    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def export_aggregate_csv(aggregates: list[AggregateRow], path: str | Path) -> Path:
    lines = [",".join(AGGREGATE_COLUMNS)]
    for a in aggregates:
        lines.append(
            ",".join(
                [
                    a.method,
                    a.axis,
                    f"{a.axis_value:.6f}",
                    str(a.n_cases),
                    f"{a.mean_jaccard:.6f}",
                    f"{a.std_jaccard:.6f}",
                    f"{a.mean_accuracy:.6f}",
                    f"{a.mean_dice:.6f}",
                    f"{a.mean_precision:.6f}",
                    f"{a.mean_recall:.6f}",
                    f"{a.mean_f_measure:.6f}",
                ]
            )
        )
    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_csv(path: str | Path) -> list[EvalRecord]:
    """Inverse of :func:`export_csv`."""
    text = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if tuple(text[0].split(",")) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV columns in {path}")
    records = []
    for line in text[1:]:
        f = line.split(",")
        d = dict(zip(CSV_COLUMNS, f))
        row = MetricsRow(
            accuracy=float(d["accuracy"]),
            jaccard=float(d["jaccard"]),
            dice=float(d["dice"]),
            precision=float(d["precision"]),
            recall=float(d["recall"]),
            f_measure=float(d["f_measure"]),
            method=d["method"],
            case_id=d["case_id"],
            elapsed=float(d["elapsed_s"]),
        )
        records.append(
            EvalRecord(
                row=row,
                axis=d["axis"],
                axis_value=float(d["axis_value"]),
                iterations=int(d["iterations"]),
                converged=d["converged"] == "true",
            )
        )
    return records


# ---------------------------------------------------------------------------
# Method comparison via the rank-sum test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    measure: str
    method_a: str
    method_b: str
    result: RankSumResult
    alpha: float = 0.01

    @property
    def significant(self) -> bool:
        return self.result.significant(self.alpha)


MEASURES = ("accuracy", "jaccard", "dice", "precision", "recall", "f_measure")


def compare_methods(
    records: list[EvalRecord],
    method_a: str,
    method_b: str,
    alpha: float = 0.01,
) -> list[ComparisonRow]:
    """Rank-sum test per measure between two methods' per-case values."""
    out = []
    for measure in MEASURES:
        a = [getattr(r.row, measure) for r in records if r.method == method_a]
        b = [getattr(r.row, measure) for r in records if r.method == method_b]
        if not a or not b:
            raise ValueError(f"no records for one of the methods {method_a!r}/{method_b!r}")
        out.append(
            ComparisonRow(
                measure=measure,
                method_a=method_a,
                method_b=method_b,
                result=wilcoxon_ranksum(a, b),
                alpha=alpha,
            )
        )
    return out


def export_compare_csv(rows: list[ComparisonRow], path: str | Path) -> Path:
    lines = ["measure,method_a,method_b,n_a,n_b,u_statistic,p_two_sided,approach,significant"]
    for c in rows:
        r = c.result
        lines.append(
            ",".join(
                [
                    c.measure,
                    c.method_a,
                    c.method_b,
                    str(r.n1),
                    str(r.n2),
                    f"{r.u_statistic:.6f}",
                    f"{r.p_two_sided:.6f}",
                    r.method,
                    "true" if c.significant else "false",
                ]
            )
        )
    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
