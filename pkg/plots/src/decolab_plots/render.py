"""Render decolab sweep CSVs as stacked-panel figures.

Input rows come from the sweep writer: one x column (eta by default) plus
value columns in which an empty field means "undefined here" (for instance
the log-negativity of an unphysical preimage).  Undefined points become NaN,
which matplotlib draws as a gap in the line; plotting zeros there would
fabricate data, so gaps are the contract.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class RenderError(Exception):
    """Base class for renderer failures."""


class EmptyInputError(RenderError):
    """The CSV has a header but no data rows (or no header at all)."""


class MissingColumnError(RenderError):
    """A requested column is not in the CSV header."""


@dataclass(frozen=True)
class Panel:
    y_column: str
    y_label: str | None = None

    @property
    def label(self) -> str:
        return self.y_label if self.y_label is not None else self.y_column


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    panels: tuple[Panel, ...]
    output_path: str
    x_column: str = "eta"
    format: str = "png"

    def __post_init__(self):
        if not self.panels:
            raise RenderError("at least one panel is required")
        if self.format not in ("png", "svg"):
            raise RenderError(f"format must be png or svg, got {self.format!r}")


def read_series(path: str, columns: list[str]) -> dict[str, np.ndarray]:
    """Read the named columns; empty fields become NaN."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyInputError(f"{path} is empty")
        for column in columns:
            if column not in reader.fieldnames:
                raise MissingColumnError(
                    f"column {column!r} not in {path} (has {reader.fieldnames})"
                )
        rows = list(reader)
    if not rows:
        raise EmptyInputError(f"{path} has no data rows")
    series: dict[str, np.ndarray] = {}
    for column in columns:
        series[column] = np.array(
            [float(row[column]) if row[column] != "" else np.nan for row in rows]
        )
    return series


def render(spec: FigureSpec):
    """Build the stacked-panel figure; the caller owns saving/closing."""
    columns = [spec.x_column] + [panel.y_column for panel in spec.panels]
    series = read_series(spec.input_csv, columns)
    x = series[spec.x_column]
    n = len(spec.panels)
    fig, axes = plt.subplots(n, 1, sharex=True, figsize=(6.0, 2.4 * n), squeeze=False)
    for ax, panel in zip(axes[:, 0], spec.panels):
        ax.plot(x, series[panel.y_column], lw=1.5)
        ax.set_ylabel(panel.label)
        ax.grid(True, alpha=0.3)
    axes[-1, 0].set_xlabel(spec.x_column)
    fig.tight_layout()
    return fig


def render_to_file(spec: FigureSpec) -> str:
    fig = render(spec)
    try:
        fig.savefig(spec.output_path, format=spec.format, dpi=150)
    finally:
        plt.close(fig)
    return spec.output_path


def _parse_panel(raw: str) -> Panel:
    if ":" in raw:
        column, label = raw.split(":", 1)
        return Panel(y_column=column, y_label=label)
    return Panel(y_column=raw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decolab-render",
        description="Render a decolab sweep CSV as a stacked-panel figure",
    )
    parser.add_argument("--csv", required=True, help="sweep CSV path")
    parser.add_argument(
        "--panel",
        action="append",
        required=True,
        help="y column to plot, optionally 'column:label'; repeat for panels",
    )
    parser.add_argument("--x-column", default="eta")
    parser.add_argument("--out", required=True, help="output figure path")
    parser.add_argument("--format", choices=("png", "svg"), default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format
    if fmt is None:
        fmt = "svg" if args.out.lower().endswith(".svg") else "png"
    try:
        spec = FigureSpec(
            input_csv=args.csv,
            panels=tuple(_parse_panel(p) for p in args.panel),
            output_path=args.out,
            x_column=args.x_column,
            format=fmt,
        )
        render_to_file(spec)
    except (RenderError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
