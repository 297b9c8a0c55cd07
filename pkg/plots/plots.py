#!/usr/bin/env python3
"""Batch figure rendering from geogate CSV outputs.

Three figure kinds, selected with --kind:

  heatmap       from scan CSVs with columns x,y,fidelity
  trajectory3d  from Bloch trajectory CSVs with columns t,x,y,z
  timeseries    from fidelity time-series CSVs with columns t,F

Output is a PNG at 200 dpi; no interactive windows. A CSV whose header
does not match the declared kind aborts with a column diagnostic and a
nonzero exit code.
"""

from __future__ import annotations

import argparse
import csv
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXPECTED_COLUMNS = {
    "heatmap": ["x", "y", "fidelity"],
    "trajectory3d": ["t", "x", "y", "z"],
    "timeseries": ["t", "F"],
}

DPI = 200


class SchemaError(Exception):
    pass


def load_csv(path: str, kind: str) -> np.ndarray:
    """Rows of a CSV whose header must match the figure kind."""
    expected = EXPECTED_COLUMNS[kind]
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected columns {expected}")
        if header != expected:
            raise SchemaError(
                f"{path}: column mismatch for kind {kind!r}: "
                f"expected {expected}, found {header}"
            )
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return np.asarray(rows)


def render_heatmap(data: np.ndarray, out: str, title: str | None = None) -> dict:
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    if len(xs) * len(ys) != data.shape[0]:
        raise SchemaError(
            f"grid is not complete: {len(xs)} x {len(ys)} unique coordinates "
            f"but {data.shape[0]} rows"
        )
    # rows are sorted by (x, y), so a reshape recovers the grid
    grid = data[np.lexsort((data[:, 1], data[:, 0]))][:, 2].reshape(len(xs), len(ys))
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    mesh = ax.pcolormesh(xs, ys, grid.T, vmin=float(grid.min()), vmax=1.0, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="fidelity")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return {
        "cells": int(grid.size),
        "vmin": float(mesh.norm.vmin),
        "vmax": float(mesh.norm.vmax),
    }


def render_trajectory3d(data: np.ndarray, out: str, title: str | None = None) -> dict:
    xyz = data[:, 1:4]
    defect = float(np.linalg.norm(xyz[-1] - xyz[0]))
    fig = plt.figure(figsize=(5.2, 5.2))
    ax = fig.add_subplot(projection="3d")
    u = np.linspace(0, 2 * np.pi, 25)
    v = np.linspace(0, np.pi, 13)
    ax.plot_wireframe(
        np.outer(np.cos(u), np.sin(v)),
        np.outer(np.sin(u), np.sin(v)),
        np.outer(np.ones_like(u), np.cos(v)),
        color="0.8",
        linewidth=0.4,
    )
    ax.plot(xyz[:, 0], xyz[:, 1], xyz[:, 2], color="C0", linewidth=1.4)
    ax.scatter(*xyz[0], color="C2", s=40, label="start")
    ax.scatter(*xyz[-1], color="C3", s=40, marker="^", label="end")
    ax.text2D(0.02, 0.02, f"closure defect {defect:.3g}", transform=ax.transAxes)
    ax.set_box_aspect((1, 1, 1))
    ax.legend(loc="upper right")
    if title:
        ax.set_title(title)
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return {"points": int(len(xyz)), "closure_defect": defect}


def render_timeseries(data: np.ndarray, out: str, title: str | None = None) -> dict:
    t, f = data[:, 0], data[:, 1]
    final = float(f[-1])
    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    ax.plot(t, f, color="C0")
    ax.annotate(f"final {final:.5f}", xy=(t[-1], final), xytext=(-10, 8),
                textcoords="offset points", ha="right")
    ax.set_xlabel("t")
    ax.set_ylabel("F")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return {"points": int(len(t)), "final_value": final}


RENDERERS = {
    "heatmap": render_heatmap,
    "trajectory3d": render_trajectory3d,
    "timeseries": render_timeseries,
}


def render(kind: str, in_path: str, out_path: str, title: str | None = None) -> dict:
    data = load_csv(in_path, kind)
    return RENDERERS[kind](data, out_path, title)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="plots.py", description=__doc__.splitlines()[0])
    p.add_argument("--kind", required=True, choices=sorted(RENDERERS))
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    p.add_argument("--title")
    args = p.parse_args(argv)
    try:
        facts = render(args.kind, args.in_path, args.out_path, args.title)
    except SchemaError as exc:
        sys.stderr.write(f"schema error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 3
    for key, val in sorted(facts.items()):
        print(f"{key}: {val}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
