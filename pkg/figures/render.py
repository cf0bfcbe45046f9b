#!/usr/bin/env python3
"""Render sweep and trace CSVs from the qpropsim CLI as figures.

A strict presentation layer: rows are plotted as-is, never recomputed.
`invalid` or `inf` entries truncate their series, so curves stop exactly
where the producing command declared its result inapplicable.

Usage:
    python figures/render.py --in sweep.csv --kind depolarizing_sweep --out fig.png
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

NON_NUMERIC = {"invalid", "inf", "-inf", ""}

# kind -> (expected header, x column, y column, series column)
SCHEMAS = {
    "depolarizing_sweep": (["N", "p", "relative_error"], "p", "relative_error", "N"),
    "depolarizing_verify": (
        ["N", "p", "relative_error", "measured", "abs_diff"],
        "p",
        "relative_error",
        "N",
    ),
    "pmax_vs_delta": (["N", "delta", "p_max"], "delta", "p_max", "N"),
    "theorem1_sweep": (["N", "p", "bound"], "p", "bound", "N"),
    "trace": (None, "tau", "energy", None),  # trace headers carry theta_1..theta_N
}

AXIS_LABELS = {
    "depolarizing_sweep": ("noise probability p", "relative error in theta_dot"),
    "depolarizing_verify": ("noise probability p", "relative error in theta_dot"),
    "pmax_vs_delta": ("cross-term budget delta", "maximum admissible p"),
    "theorem1_sweep": ("noise probability p", "relative-error bound"),
    "trace": ("imaginary time tau", "energy"),
}

STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 130,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "qpropsim-figures",
}


@dataclass
class FigureSpec:
    csv_path: str
    kind: str
    out_path: str
    xlabel: str = ""
    ylabel: str = ""
    hline: float | None = None
    hline_label: str = "reference"
    series_key: str = field(default="", repr=False)

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")
        labels = AXIS_LABELS[self.kind]
        self.xlabel = self.xlabel or labels[0]
        self.ylabel = self.ylabel or labels[1]
        self.series_key = SCHEMAS[self.kind][3] or ""


class SchemaError(ValueError):
    """The CSV does not match the schema of the requested figure kind."""


def read_rows(path: str):
    """Rows of the CSV, header separated, trailing comment lines dropped."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = [line for line in fh if not line.startswith("#")]
    rows = list(csv.reader(raw))
    if len(rows) < 2:
        raise SchemaError(f"{path}: no data rows")
    return rows[0], rows[1:]


def check_header(kind: str, header: list[str], path: str):
    expected = SCHEMAS[kind][0]
    if expected is not None:
        if header != expected:
            raise SchemaError(
                f"{path}: header {header} does not match {expected} for kind {kind!r}"
            )
        return
    # trace: tau, theta_1..theta_N, energy, cond_M, norm_M, norm_Y, fidelity
    if (
        len(header) < 7
        or header[0] != "tau"
        or header[-5:] != ["energy", "cond_M", "norm_M", "norm_Y", "fidelity"]
        or any(h != f"theta_{i}" for i, h in enumerate(header[1:-5], start=1))
    ):
        raise SchemaError(f"{path}: not a trace CSV (header {header})")


def split_series(rows, header, x_col, y_col, series_col):
    """Group (x, y) points by series key; non-numeric y truncates the series."""
    xi, yi, si = header.index(x_col), header.index(y_col), header.index(series_col)
    series: dict[str, dict] = {}
    for row in rows:
        key = row[si]
        entry = series.setdefault(key, {"x": [], "y": [], "truncated": False})
        if entry["truncated"]:
            continue
        if row[yi] in NON_NUMERIC or row[xi] in NON_NUMERIC:
            entry["truncated"] = True
            continue
        entry["x"].append(float(row[xi]))
        entry["y"].append(float(row[yi]))
    return series


def render(spec: FigureSpec) -> None:
    header, rows = read_rows(spec.csv_path)
    check_header(spec.kind, header, spec.csv_path)
    _, x_col, y_col, series_col = SCHEMAS[spec.kind]

    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        if spec.kind == "trace":
            taus = [float(r[0]) for r in rows]
            energies = [float(r[header.index("energy")]) for r in rows]
            ax.plot(taus, energies, lw=1.5)
        else:
            series = split_series(rows, header, x_col, y_col, series_col)
            for key in sorted(series, key=lambda k: float(k) if k not in NON_NUMERIC else -1):
                entry = series[key]
                label = f"N = {key}"
                if entry["truncated"] and not entry["x"]:
                    label += " (invalid)"
                if entry["x"]:
                    ax.plot(entry["x"], entry["y"], marker="o", ms=3, lw=1.2, label=label)
                else:
                    ax.plot([], [], label=label)
            if spec.kind == "depolarizing_verify":
                measured = split_series(rows, header, x_col, "measured", series_col)
                for key, entry in sorted(measured.items(), key=lambda kv: float(kv[0])):
                    if entry["x"]:
                        ax.plot(entry["x"], entry["y"], ls="--", lw=1.0,
                                label=f"N = {key} (measured)")
            ax.legend(fontsize=8)
        if spec.hline is not None:
            ax.axhline(spec.hline, color="black", ls=":", lw=1.0, label=spec.hline_label)
            ax.legend(fontsize=8)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
        fig.tight_layout()
        fig.savefig(spec.out_path, metadata=_pinned_metadata(spec.out_path))
        plt.close(fig)


def _pinned_metadata(out_path: str):
    # PNG writers stamp a Software field; pin it so identical CSVs give
    # byte-identical images across matplotlib patch versions.
    if out_path.lower().endswith(".png"):
        return {"Software": "qpropsim-figures"}
    return None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--in", dest="csv_path", required=True, help="input CSV")
    parser.add_argument("--kind", required=True, choices=sorted(SCHEMAS))
    parser.add_argument("--out", dest="out_path", required=True, help="output image")
    parser.add_argument("--hline", type=float, default=None,
                        help="horizontal annotation line (e.g. a ground energy)")
    parser.add_argument("--hline-label", default="reference")
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(args.csv_path, args.kind, args.out_path,
                          hline=args.hline, hline_label=args.hline_label))
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
