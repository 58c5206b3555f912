"""Render sweep CSVs into static figures.

Consumes only the harness CSV schema (experiment, grid coordinates, metric,
mean, stderr, trials, seed); no coupling to the solver package.  Line plots
show one series per metric over a single grid coordinate; heatmaps show one
metric over a two-coordinate grid.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


class SchemaError(ValueError):
    """CSV does not conform to the sweep schema; message names the gap."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw and where to put it."""

    csv_path: str
    kind: str  # "lines" | "heatmap"
    out_path: str
    metrics: Optional[Sequence[str]] = None  # default: all for lines
    heatmap_metric: str = "r1"
    x_label: str = ""
    y_label: str = ""
    title: str = ""


@dataclass
class SweepTable:
    coord_names: list[str]
    rows: list[dict] = field(default_factory=list)


_BASE_COLUMNS = ("experiment", "metric", "mean", "stderr", "trials", "seed")


def load_sweep_csv(path: str) -> SweepTable:
    """Parse a harness CSV, validating the schema."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty CSV: missing header row")
        for col in _BASE_COLUMNS:
            if col not in header:
                raise SchemaError(f"missing column: {col}")
        coord_names = [c for c in header if c not in _BASE_COLUMNS]
        if not coord_names:
            raise SchemaError("no grid coordinate column found")
        table = SweepTable(coord_names=coord_names)
        index = {c: header.index(c) for c in header}
        for lineno, cells in enumerate(reader, start=2):
            if len(cells) != len(header):
                raise SchemaError(f"line {lineno}: expected {len(header)} "
                                  f"cells, got {len(cells)}")
            row = {"experiment": cells[index["experiment"]],
                   "metric": cells[index["metric"]]}
            try:
                for c in coord_names:
                    row[c] = float(cells[index[c]])
                row["mean"] = float(cells[index["mean"]])
                row["stderr"] = float(cells[index["stderr"]])
                row["trials"] = int(cells[index["trials"]])
            except ValueError as exc:
                raise SchemaError(f"line {lineno}: {exc}")
            table.rows.append(row)
    if not table.rows:
        raise SchemaError("CSV has a header but no data rows")
    return table


def _deterministic_savefig(fig, out_path: str):
    # strip volatile metadata so vector re-renders are byte-identical
    metadata = {"Date": None} if out_path.endswith(".svg") else None
    if out_path.endswith(".svg"):
        plt.rcParams["svg.hashsalt"] = "jamcraft-figures"
    fig.savefig(out_path, dpi=150, bbox_inches="tight", metadata=metadata)
    plt.close(fig)


def render_lines(spec: FigureSpec) -> str:
    """One series per metric against the single grid coordinate."""
    table = load_sweep_csv(spec.csv_path)
    coord = table.coord_names[0]
    metrics = list(spec.metrics) if spec.metrics else sorted(
        {r["metric"] for r in table.rows})
    missing = [m for m in metrics
               if not any(r["metric"] == m for r in table.rows)]
    if missing:
        raise SchemaError(f"metric not present in CSV: {missing[0]}")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for metric in metrics:
        pts = sorted(((r[coord], r["mean"], r["stderr"])
                      for r in table.rows if r["metric"] == metric))
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        es = [p[2] for p in pts]
        ax.errorbar(xs, ys, yerr=es, marker="o", markersize=3.5,
                    capsize=2, linewidth=1.2, label=metric)
    ax.set_xlabel(spec.x_label or coord)
    ax.set_ylabel(spec.y_label or "mean (nats)")
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    _deterministic_savefig(fig, spec.out_path)
    return spec.out_path


def render_heatmap(spec: FigureSpec) -> str:
    """One metric over a two-coordinate grid as a labeled heatmap."""
    table = load_sweep_csv(spec.csv_path)
    if len(table.coord_names) < 2:
        raise SchemaError("heatmap needs two grid coordinate columns, "
                          f"found {table.coord_names}")
    cx, cy = table.coord_names[0], table.coord_names[1]
    rows = [r for r in table.rows if r["metric"] == spec.heatmap_metric]
    if not rows:
        raise SchemaError(
            f"metric not present in CSV: {spec.heatmap_metric}")
    xs = sorted({r[cx] for r in rows})
    ys = sorted({r[cy] for r in rows})
    grid = [[float("nan")] * len(xs) for _ in ys]
    for r in rows:
        grid[ys.index(r[cy])][xs.index(r[cx])] = r["mean"]

    fig, ax = plt.subplots(figsize=(5.6, 4.4))
    im = ax.imshow(grid, origin="lower", aspect="auto",
                   extent=(min(xs), max(xs), min(ys), max(ys)),
                   cmap="viridis")
    fig.colorbar(im, ax=ax, label=spec.heatmap_metric)
    ax.set_xlabel(spec.x_label or cx)
    ax.set_ylabel(spec.y_label or cy)
    if spec.title:
        ax.set_title(spec.title)
    _deterministic_savefig(fig, spec.out_path)
    return spec.out_path


def render(spec: FigureSpec) -> str:
    """Dispatch on the figure kind; returns the written path."""
    if spec.kind == "lines":
        return render_lines(spec)
    if spec.kind == "heatmap":
        return render_heatmap(spec)
    raise SchemaError(f"unknown figure kind: {spec.kind!r}")


# Shorthand presets matching the harness experiments.
PRESETS = {
    "fig1": FigureSpec(
        csv_path="", kind="lines", out_path="",
        metrics=["rate_closed_form", "rate_spca", "rate_suboptimal"],
        x_label="jammer power budget", y_label="mean rate (nats)",
        title="single-target rates under jamming"),
    "fig2": FigureSpec(
        csv_path="", kind="lines", out_path="",
        metrics=["psd_fraction"],
        x_label="jammer power budget", y_label="fraction",
        title="validity of the exact closed form"),
    "fig3": FigureSpec(
        csv_path="", kind="lines", out_path="",
        metrics=["rate_unjammed", "rate_jammed"],
        x_label="jammer power budget", y_label="sum rate (nats)",
        title="broadcast sum rate with and without jamming"),
    "fig4": FigureSpec(
        csv_path="", kind="heatmap", out_path="", heatmap_metric="r1",
        x_label="first-pair transmit power", y_label="jam-channel variance",
        title="relative sum-rate reduction"),
    "fig5": FigureSpec(
        csv_path="", kind="heatmap", out_path="", heatmap_metric="r2",
        x_label="first-pair transmit power", y_label="jam-channel variance",
        title="share of jamming power on the first pair"),
    "fig45": FigureSpec(
        csv_path="", kind="heatmap", out_path="", heatmap_metric="r1",
        x_label="first-pair transmit power", y_label="jam-channel variance",
        title="relative sum-rate reduction"),
}


def preset_spec(name: str, csv_path: str, out_path: str) -> FigureSpec:
    if name not in PRESETS:
        raise SchemaError(f"unknown preset: {name!r}")
    base = PRESETS[name]
    return FigureSpec(csv_path=csv_path, kind=base.kind, out_path=out_path,
                      metrics=base.metrics,
                      heatmap_metric=base.heatmap_metric,
                      x_label=base.x_label, y_label=base.y_label,
                      title=base.title)
