"""Figure rendering for the reporting CLI paths.

Every figure goes straight to a file via the Agg backend; nothing here
opens a window.  Figures accompany the CSV outputs so a sweep or a
comparison can be eyeballed without loading the tables.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .harness import AggregateRow, EvalRecord, MEASURES

_AXIS_LABEL = {
    "interior_fraction": "interior annotation fraction",
    "exterior_distance": "exterior ring distance (px)",
}

_METHOD_STYLE = {
    "bgrowth": {"color": "#1b6ca8", "marker": "o"},
    "growcut": {"color": "#c0392b", "marker": "s"},
    "otsu": {"color": "#7f8c8d", "marker": "^"},
}


def plot_sweep(aggregates: list[AggregateRow], path: str | Path, measure: str = "jaccard") -> Path:
    """Mean measure vs axis value, one line per method, std error bars on Jaccard."""
    if not aggregates:
        raise ValueError("nothing to plot")
    axis = aggregates[0].axis
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    methods = sorted({a.method for a in aggregates})
    for method in methods:
        rows = sorted((a for a in aggregates if a.method == method), key=lambda a: a.axis_value)
        xs = [a.axis_value for a in rows]
        ys = [getattr(a, f"mean_{measure}") for a in rows]
        style = _METHOD_STYLE.get(method, {})
        if measure == "jaccard":
            errs = [a.std_jaccard for a in rows]
            ax.errorbar(xs, ys, yerr=errs, label=method, capsize=3, **style)
        else:
            ax.plot(xs, ys, label=method, **style)
    ax.set_xlabel(_AXIS_LABEL.get(axis, axis))
    ax.set_ylabel(f"mean {measure}")
    ax.set_title(f"{measure} over {_AXIS_LABEL.get(axis, axis)}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_compare(records: list[EvalRecord], method_a: str, method_b: str, path: str | Path) -> Path:
    """Box plots of the six measures for the two methods side by side."""
    fig, axes = plt.subplots(2, 3, figsize=(10.5, 6.5))
    for ax, measure in zip(axes.ravel(), MEASURES):
        data = []
        for method in (method_a, method_b):
            data.append([getattr(r.row, measure) for r in records if r.method == method])
        ax.boxplot(data, tick_labels=[method_a, method_b])
        ax.set_title(measure)
        ax.grid(True, alpha=0.3)
    fig.suptitle(f"{method_a} vs {method_b}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
