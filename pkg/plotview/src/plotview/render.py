"""Render a phase-scan CSV export as a filled region-and-curve figure.

The input contract is the scan export schema: a grid file with columns
``alpha,beta,margin,phase`` (empty margin field on OUTSIDE cells) and a
companion ``<input>.curve.csv`` holding the traced zero curve as
``alpha,beta`` rows.  This tool only reads that contract; it never
recomputes a margin.  The figure fills the SUPER, SUB and OUTSIDE
regions, highlights the near-zero band ``|margin| < epsilon``, overlays
the curve, and embeds the generating command in the caption.
"""

import argparse
import csv
import json
import math
import os
import shlex
import sys
from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.lines import Line2D
from matplotlib.patches import Patch

GRID_COLUMNS = ("alpha", "beta", "margin", "phase")
CURVE_COLUMNS = ("alpha", "beta")
PHASES = ("OUTSIDE", "SUB", "SUPER")

# cell fill per phase code 0/1/2, then the band and curve accents
REGION_COLORS = ("#d4d4d4", "#f0c998", "#a3cbe8")
BAND_COLOR = "#8fd694"
CURVE_COLOR = "#1b5e20"


class SchemaError(ValueError):
    """The input file does not follow the scan export schema."""


def _check_header(actual, expected, path: str) -> None:
    actual = list(actual)
    for name in expected:
        if name not in actual:
            raise SchemaError(f"{path}: missing column {name!r}")
    for name in actual:
        if name not in expected:
            raise SchemaError(f"{path}: unexpected column {name!r}")
    for got, want in zip(actual, expected):
        if got != want:
            raise SchemaError(
                f"{path}: column {got!r} out of order, header must read "
                + ",".join(expected)
            )


def _float_field(text: str, column: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SchemaError(
            f"{where}: column {column!r} is not numeric: {text!r}"
        ) from None


def read_scan_csv(path: str):
    """Load a grid export; returns (alphas, betas, margin, phase) arrays.

    ``margin`` is float with NaN on OUTSIDE cells; ``phase`` is an object
    array of the three labels.  Any departure from the export schema
    raises SchemaError naming the offending column or cell.
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError(
                f"{path}: empty file, expected columns " + ",".join(GRID_COLUMNS)
            )
        _check_header(header, GRID_COLUMNS, path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            where = f"{path}:{lineno}"
            if len(row) != len(GRID_COLUMNS):
                raise SchemaError(
                    f"{where}: expected {len(GRID_COLUMNS)} fields, got {len(row)}"
                )
            a = _float_field(row[0], "alpha", where)
            b = _float_field(row[1], "beta", where)
            label = row[3]
            if label not in PHASES:
                raise SchemaError(
                    f"{where}: column 'phase' has unknown value {label!r}"
                )
            if row[2] == "":
                if label != "OUTSIDE":
                    raise SchemaError(
                        f"{where}: column 'margin' is empty on a {label} cell"
                    )
                m = math.nan
            else:
                m = _float_field(row[2], "margin", where)
            rows.append((a, b, m, label))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    alphas = sorted({r[0] for r in rows})
    betas = sorted({r[1] for r in rows})
    if len(rows) != len(alphas) * len(betas):
        raise SchemaError(
            f"{path}: {len(rows)} rows do not tile the "
            f"{len(alphas)}x{len(betas)} grid of distinct alpha,beta values"
        )
    ia = {a: i for i, a in enumerate(alphas)}
    ib = {b: j for j, b in enumerate(betas)}
    margin = np.full((len(alphas), len(betas)), np.nan)
    phase = np.full((len(alphas), len(betas)), "", dtype=object)
    for a, b, m, label in rows:
        margin[ia[a], ib[b]] = m
        phase[ia[a], ib[b]] = label
    if (phase == "").any():
        raise SchemaError(f"{path}: duplicated cells leave grid positions unfilled")
    return np.asarray(alphas), np.asarray(betas), margin, phase


def read_curve_csv(path: str) -> list:
    """Zero-curve points from a companion file; empty list when none traced."""
    points = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError(
                f"{path}: empty file, expected columns " + ",".join(CURVE_COLUMNS)
            )
        _check_header(header, CURVE_COLUMNS, path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            where = f"{path}:{lineno}"
            if len(row) != 2:
                raise SchemaError(f"{where}: expected 2 fields, got {len(row)}")
            points.append(
                (
                    _float_field(row[0], "alpha", where),
                    _float_field(row[1], "beta", where),
                )
            )
    return points


@dataclass
class FigureSpec:
    """What to read, where to draw it, and how to label it."""

    input_csv: str
    output_path: str
    epsilon: Optional[float] = None
    xlabel: str = "alpha"
    ylabel: str = "beta"
    title: Optional[str] = None
    command: Optional[str] = None

    def default_command(self) -> str:
        parts = ["render", "--in", shlex.quote(self.input_csv), "--out", shlex.quote(self.output_path)]
        if self.epsilon is not None:
            parts += ["--epsilon", format(self.epsilon, "g")]
        return " ".join(parts)


def _edges(centers: np.ndarray) -> np.ndarray:
    if len(centers) == 1:
        c = float(centers[0])
        return np.array([c - 0.5, c + 0.5])
    mid = (centers[:-1] + centers[1:]) / 2.0
    first = centers[0] - (mid[0] - centers[0])
    last = centers[-1] + (centers[-1] - mid[-1])
    return np.concatenate([[first], mid, [last]])


def render(spec: FigureSpec) -> dict:
    """Write the figure for ``spec``; returns counts of what was drawn."""
    alphas, betas, margin, phase = read_scan_csv(spec.input_csv)
    curve_path = spec.input_csv + ".curve.csv"
    curve = read_curve_csv(curve_path) if os.path.exists(curve_path) else []

    finite = np.isfinite(margin)
    if spec.epsilon is not None:
        epsilon = float(spec.epsilon)
        if epsilon < 0.0:
            raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    else:
        epsilon = 0.01 * float(np.abs(margin[finite]).max()) if finite.any() else 0.0
    band = finite & (np.abs(margin) < epsilon)

    codes = np.zeros(phase.shape, dtype=float)
    for value, label in enumerate(PHASES):
        codes[phase == label] = value

    fig, ax = plt.subplots(figsize=(7.0, 6.2))
    ea, eb = _edges(alphas), _edges(betas)
    ax.pcolormesh(
        ea, eb, codes.T, cmap=ListedColormap(REGION_COLORS), vmin=-0.5, vmax=2.5
    )
    if band.any():
        shade = np.ma.masked_where(~band.T, np.ones_like(codes.T))
        ax.pcolormesh(ea, eb, shade, cmap=ListedColormap([BAND_COLOR]), vmin=0, vmax=1)
    if curve:
        pts = sorted(curve)
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            color=CURVE_COLOR,
            linewidth=1.4,
            marker=".",
            markersize=3,
        )

    counts = {label: int((phase == label).sum()) for label in PHASES}
    handles = [
        Patch(facecolor=REGION_COLORS[code], label=label)
        for code, label in enumerate(PHASES)
        if counts[label]
    ]
    if band.any():
        handles.append(Patch(facecolor=BAND_COLOR, label=f"|margin| < {epsilon:.3g}"))
    if curve:
        handles.append(Line2D([], [], color=CURVE_COLOR, label="zero curve"))
    ax.legend(handles=handles, loc="upper right", fontsize=8, framealpha=0.9)

    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    ax.set_title(spec.title or os.path.basename(spec.input_csv))
    caption = "generated by: " + (spec.command or spec.default_command())
    fig.text(0.5, 0.012, caption, ha="center", fontsize=7, family="monospace")
    fig.tight_layout(rect=(0.0, 0.04, 1.0, 1.0))
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)

    return {
        "out": spec.output_path,
        "cells": int(phase.size),
        "super": counts["SUPER"],
        "sub": counts["SUB"],
        "outside": counts["OUTSIDE"],
        "band": int(band.sum()),
        "curve_points": len(curve),
        "epsilon": epsilon,
        "caption": caption,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Draw phase regions, the near-zero band, and the zero "
        "curve from a scan CSV export.",
    )
    parser.add_argument("--in", dest="input", required=True, metavar="CSV")
    parser.add_argument("--out", dest="output", required=True, metavar="IMAGE")
    parser.add_argument(
        "--epsilon",
        type=float,
        default=None,
        help="half-width of the highlighted |margin| band "
        "(default: 1e-2 of the largest |margin| on the grid)",
    )
    parser.add_argument("--xlabel", default="alpha")
    parser.add_argument("--ylabel", default="beta")
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)

    words = list(argv) if argv is not None else sys.argv[1:]
    command = " ".join(["render"] + [shlex.quote(w) for w in words])
    spec = FigureSpec(
        args.input,
        args.output,
        epsilon=args.epsilon,
        xlabel=args.xlabel,
        ylabel=args.ylabel,
        title=args.title,
        command=command,
    )
    try:
        summary = render(spec)
    except SchemaError as exc:
        print(f"render: schema mismatch: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"render: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"render: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
