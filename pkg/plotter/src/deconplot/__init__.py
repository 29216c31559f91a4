"""Render pilotdecon result CSVs into estimation-error and rate figures.

This package is a pure view of the CSV interface: it never recomputes any
metric. Each figure draws one polyline per estimator (per scenario, when
several are present), sorted by antenna count, with a dB y-axis for errors
and a linear one for rates.
"""

__version__ = "0.1.0"

import csv
import io
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_COLUMNS = [
    "scenario", "estimator", "M", "K", "L", "C", "trials",
    "mean_err_db", "median_err_db", "std_err_db", "mean_rate",
    "theorem1_frac", "theorem2_frac", "theorem3_frac",
]

# Metric name -> (CSV column per statistic, y-axis label, dB scale?)
METRICS = {
    "err_db": ({"mean": "mean_err_db", "median": "median_err_db"},
               "normalized estimation error [dB]", True),
    "rate": ({"mean": "mean_rate", "median": "mean_rate"},
             "per-cell rate [bit/s/Hz]", False),
}

ESTIMATOR_LABELS = {
    "ls": "LS",
    "mmse": "MMSE",
    "am": "Amplitude",
    "ca": "Covariance-aided amplitude",
    "sa": "Subspace + amplitude",
    "ma": "MMSE + amplitude",
}


class SchemaError(ValueError):
    """The CSV does not follow the harness result schema."""


@dataclass(frozen=True)
class PlotSpec:
    """What to render: inputs, metric, output path, optional labels."""

    inputs: tuple
    metric: str
    output: str
    statistic: str = "mean"
    title: str = ""
    xlabel: str = "number of antennas M"
    ylabel: str = ""


def read_rows(path):
    """Parse one harness CSV; returns a list of row dicts.

    Leading '#' comment lines are skipped; the header must match the
    harness schema exactly, else a SchemaError carries the diff.
    """
    with open(path, encoding="utf-8") as handle:
        lines = [line for line in handle if not line.startswith("#")]
    reader = csv.DictReader(io.StringIO("".join(lines)))
    found = reader.fieldnames or []
    if list(found) != EXPECTED_COLUMNS:
        missing = [c for c in EXPECTED_COLUMNS if c not in found]
        extra = [c for c in found if c not in EXPECTED_COLUMNS]
        raise SchemaError(
            f"{path}: header mismatch; missing columns {missing}, "
            f"unexpected columns {extra}"
        )
    rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def curves_from_rows(rows, metric, statistic="mean"):
    """(label -> sorted [(M, value), ...]) for the requested metric."""
    if metric not in METRICS:
        raise SchemaError(f"unknown metric {metric!r}; choose from {list(METRICS)}")
    columns, _, _ = METRICS[metric]
    column = columns[statistic]
    scenarios = {row["scenario"] for row in rows}
    curves = {}
    for row in rows:
        label = ESTIMATOR_LABELS.get(row["estimator"], row["estimator"])
        if len(scenarios) > 1:
            label = f"{row['scenario']}: {label}"
        curves.setdefault(label, []).append((int(row["M"]), float(row[column])))
    for points in curves.values():
        points.sort()
    return curves


def build_figure(spec):
    """Matplotlib figure for a PlotSpec (not yet written to disk)."""
    rows = []
    for path in spec.inputs:
        rows.extend(read_rows(path))
    curves = curves_from_rows(rows, spec.metric, spec.statistic)
    _, ylabel, _ = METRICS[spec.metric]
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for label in sorted(curves):
        points = curves[label]
        ax.plot([m for m, _ in points], [v for _, v in points],
                marker="o", markersize=3.5, label=label)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel or ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render(spec):
    """Build and write the figure; deterministic for fixed input."""
    fig = build_figure(spec)
    plt.rcParams["svg.hashsalt"] = "deconplot"
    metadata = {}
    if spec.output.endswith(".svg"):
        metadata["Date"] = None
    elif spec.output.endswith(".pdf"):
        metadata["CreationDate"] = None
    fig.savefig(spec.output, metadata=metadata or None)
    plt.close(fig)
    return spec.output
