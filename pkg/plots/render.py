#!/usr/bin/env python3
"""Render experiment tables as SVG figures.

Strictly a viewer for committed CSV artifacts: every plotted number is read
from the table or its .meta.json sidecar, never recomputed.  Output bytes
depend only on the input files, so regenerated figures diff clean.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import pathlib
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

LINE = "#1f4e79"
REFERENCE = "#a33b3b"


class SchemaError(ValueError):
    """The input table does not have the columns the kind requires."""


@dataclass(frozen=True)
class PlotSpec:
    """What a figure kind needs from its table and how to draw it."""

    kind: str
    columns: tuple[str, ...]
    xlabel: str
    ylabel: str
    logy: bool = False


SPECS = {
    "mixing_curve": PlotSpec(
        "mixing_curve", ("t", "box_norm"),
        "steps t", "box norm of the evolved start law", logy=True),
    "coll_vs_depth": PlotSpec(
        "coll_vs_depth", ("s", "mean", "stderr"),
        "depth s", "expected collision probability"),
    "spectrum": PlotSpec(
        "spectrum", ("m", "eigenvalue"),
        "mode index m", "eigenvalue"),
    "anticonc": PlotSpec(
        "anticonc", ("theta", "fraction"),
        "threshold theta", "fraction of heavy outputs"),
    "gap_table": PlotSpec(
        "gap_table",
        ("method", "d", "m", "t", "cos_angle", "gap_value", "q_inf",
         "c_dnt", "bound"),
        "", ""),
}


def read_table(path: pathlib.Path, spec: PlotSpec) -> list[dict]:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        names = reader.fieldnames
        if names is None:
            raise SchemaError(f"{path.name}: no header row; expected columns "
                              f"{', '.join(spec.columns)}")
        for col in spec.columns:
            if col not in names:
                raise SchemaError(
                    f"{path.name}: missing column '{col}' required by kind "
                    f"'{spec.kind}'")
        return list(reader)


def sidecar_n(path: pathlib.Path) -> int | None:
    """Circuit size recorded by the experiment runner, if the sidecar exists."""
    meta = path.with_name(path.stem + ".meta.json")
    if not meta.exists():
        return None
    payload = json.loads(meta.read_text())
    value = payload.get("config", {}).get("n")
    return int(value) if value is not None else None


def _floats(rows: list[dict], column: str) -> list[float]:
    out = []
    for line, row in enumerate(rows, start=2):
        cell = row[column]
        try:
            out.append(float(cell))
        except ValueError:
            raise SchemaError(f"line {line}: column '{column}' has "
                              f"non-numeric cell {cell!r}") from None
    return out


def draw_mixing_curve(ax, rows: list[dict], n: int | None) -> None:
    if rows:
        ax.plot(_floats(rows, "t"), _floats(rows, "box_norm"),
                marker="o", markersize=3, linewidth=1, color=LINE)
    ax.set_yscale("log")
    if n is not None:
        ax.axhline(28.0 / 2 ** n, linestyle="--", linewidth=1,
                   color=REFERENCE, label="28 / 2^n")
        ax.legend(loc="upper right")


def draw_coll_vs_depth(ax, rows: list[dict], n: int | None) -> None:
    if rows:
        ax.errorbar(_floats(rows, "s"), _floats(rows, "mean"),
                    yerr=_floats(rows, "stderr"), marker="o", markersize=3,
                    linewidth=1, elinewidth=1, capsize=2, color=LINE)
    if n is not None:
        ax.axhline(2.0 / (2 ** n + 1), linestyle="--", linewidth=1,
                   color=REFERENCE, label="2 / (2^n + 1)")
        ax.legend(loc="upper right")


def draw_spectrum(ax, rows: list[dict], n: int | None) -> None:
    if rows:
        ms = _floats(rows, "m")
        eigs = _floats(rows, "eigenvalue")
        ax.vlines(ms, 0.0, eigs, linewidth=1, color=LINE)
        ax.plot(ms, eigs, "o", markersize=4, color=LINE)
    ax.axhline(0.0, linewidth=0.8, color="#666666")


def draw_anticonc(ax, rows: list[dict], n: int | None) -> None:
    if rows:
        ax.plot(_floats(rows, "theta"), _floats(rows, "fraction"),
                "o", markersize=5, color=LINE)
    ax.set_ylim(0.0, 1.05)


def draw_gap_table(ax, rows: list[dict], n: int | None) -> None:
    ax.axis("off")
    if not rows:
        return
    columns = SPECS["gap_table"].columns
    cells = [[row[c] for c in columns] for row in rows]
    table = ax.table(cellText=cells, colLabels=list(columns),
                     cellLoc="center", loc="center")
    table.auto_set_font_size(False)
    table.set_fontsize(7)
    table.scale(1.0, 1.4)


DRAWERS = {
    "mixing_curve": draw_mixing_curve,
    "coll_vs_depth": draw_coll_vs_depth,
    "spectrum": draw_spectrum,
    "anticonc": draw_anticonc,
    "gap_table": draw_gap_table,
}


def render(kind: str, src: pathlib.Path, dst: pathlib.Path) -> None:
    spec = SPECS[kind]
    rows = read_table(src, spec)
    n = sidecar_n(src)

    # ids inside the SVG are salted hashes; pin the salt for stable bytes
    plt.rcParams["svg.hashsalt"] = "designlab-plots"
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=100)
    try:
        DRAWERS[kind](ax, rows, n)
        if spec.xlabel:
            ax.set_xlabel(spec.xlabel)
            ax.set_ylabel(spec.ylabel)
        title = kind if n is None else f"{kind} (n = {n})"
        ax.set_title(title)
        fig.tight_layout()
        buffer = io.BytesIO()
        fig.savefig(buffer, format="svg",
                    metadata={"Date": None, "Creator": None})
    finally:
        plt.close(fig)
    dst.write_bytes(buffer.getvalue())


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a committed CSV table as SVG.")
    parser.add_argument("--kind", required=True, choices=sorted(SPECS))
    parser.add_argument("--in", dest="src", required=True,
                        help="input CSV table")
    parser.add_argument("--out", dest="dst", required=True,
                        help="output SVG path")
    args = parser.parse_args(argv)
    try:
        render(args.kind, pathlib.Path(args.src), pathlib.Path(args.dst))
    except (SchemaError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
