"""Serialization of experiment results: delimited table, JSON summary, figure.

The delimited table always has the same six columns so downstream scripts
can parse any experiment the same way. Numbers print with %.17g, enough to
round-trip a double, and files use "\n" newlines on every platform. The
JSON summary nests all volatile fields (wall-clock timing) under the single
"timestamp" key, so two runs of the same configuration agree everywhere
else byte for byte.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Optional

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "beable-overlap"

import matplotlib.pyplot as plt
import numpy as np

from .experiments import ExperimentResult

VERSION_STRING = "beable-overlap 0.1.0"

CSV_HEADER = "parameter,mean,stderr,samples,analytic_ref,bound"


def _cell(value: Optional[float]) -> str:
    return "" if value is None else "%.17g" % value


def csv_lines(result: ExperimentResult) -> list[str]:
    lines = [CSV_HEADER]
    for row in result.rows:
        if row.estimate is None:
            mean, stderr, samples = "", "", ""
        else:
            mean = _cell(row.estimate.mean)
            stderr = _cell(row.estimate.stderr)
            samples = str(row.estimate.samples)
        lines.append(
            ",".join(
                [str(row.parameter), mean, stderr, samples,
                 _cell(row.analytic), _cell(row.bound)]
            )
        )
    return lines


def write_csv(result: ExperimentResult, path) -> None:
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(csv_lines(result)) + "\n")


def summary_dict(result: ExperimentResult, wall_time_s: Optional[float] = None) -> dict:
    """JSON-ready summary; everything run-dependent sits under "timestamp"."""
    rows = []
    for row in result.rows:
        entry = {
            "parameter": row.parameter,
            "mean": None if row.estimate is None else row.estimate.mean,
            "stderr": None if row.estimate is None else row.estimate.stderr,
            "samples": None if row.estimate is None else row.estimate.samples,
            "analytic_ref": row.analytic,
            "bound": row.bound,
        }
        rows.append(entry)
    return {
        "version": VERSION_STRING,
        "experiment": result.name,
        "config": result.config,
        "rows": rows,
        "extras": result.extras,
        "timestamp": {
            "utc": datetime.now(timezone.utc).isoformat(),
            "wall_time_s": wall_time_s,
        },
    }


def write_json(result: ExperimentResult, path, wall_time_s: Optional[float] = None) -> None:
    with open(path, "w", newline="\n") as handle:
        json.dump(summary_dict(result, wall_time_s), handle, sort_keys=True, indent=2)
        handle.write("\n")


def _estimate_series(result: ExperimentResult):
    xs, ys, errs = [], [], []
    for row in result.rows:
        if row.estimate is not None:
            xs.append(row.parameter)
            ys.append(row.estimate.mean)
            errs.append(row.estimate.stderr)
    return xs, ys, errs


def _maybe_log_x(ax, xs):
    if xs and min(xs) > 0 and max(xs) >= 16 * min(xs):
        ax.set_xscale("log", base=2)


def _draw_curve(result: ExperimentResult, ax) -> None:
    xs, ys, errs = _estimate_series(result)
    ax.errorbar(xs, ys, yerr=errs, fmt="o-", capsize=3, label="estimate")
    analytic = [(r.parameter, r.analytic) for r in result.rows if r.analytic is not None]
    if analytic:
        ax.plot(*zip(*analytic), "x", markersize=9, label="analytic")
    bounds = [(r.parameter, r.bound) for r in result.rows if r.bound is not None]
    if bounds:
        ax.plot(*zip(*bounds), "--", label="bound")
    if result.name == "figure1":
        curve = result.extras.get("cube_curve", [])
        if curve:
            ax.errorbar(
                [p["parameter"] for p in curve],
                [p["mean"] for p in curve],
                yerr=[p["stderr"] for p in curve],
                fmt="s-", capsize=3, label="cube integral",
            )
        ax.axhline(result.extras["cube_limit"], linestyle=":", color="gray")
    if result.name == "integral-f":
        ax.axhline(result.extras["limit"], linestyle=":", color="gray")
    _maybe_log_x(ax, xs or [r.parameter for r in result.rows])
    ax.set_xlabel("dimension")
    ax.set_ylabel("mean overlap")
    ax.legend()


def _draw_bound(result: ExperimentResult, ax) -> None:
    xs = [row.parameter for row in result.rows]
    ax.plot(xs, [row.analytic for row in result.rows], "o-", label="real, given epsilon")
    ax.plot(xs, [row.bound for row in result.rows], "--", label="real, optimal epsilon")
    reports = result.extras.get("reports", [])
    if reports:
        ax.plot(
            [r["parameter"] for r in reports],
            [r["complex_optimal_value"] for r in reports],
            ":", label="complex, optimal epsilon",
        )
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("dimension")
    ax.set_ylabel("bound value")
    ax.legend()


def _draw_decay(result: ExperimentResult, ax) -> None:
    xs, ys, errs = _estimate_series(result)
    ax.errorbar(xs, ys, yerr=errs, fmt="o", capsize=3, label="estimate")
    analytic = [(r.parameter, r.analytic) for r in result.rows if r.analytic is not None]
    if analytic:
        ax.plot(*zip(*analytic), "x", markersize=9, label="analytic")
    fit = result.extras.get("fit")
    fitted = result.extras.get("fitted_counts", [])
    if fit and fitted:
        grid = np.linspace(min(fitted), max(fitted), 64)
        ax.plot(grid, np.exp(fit["intercept"] + fit["slope"] * grid), "-", label="fit")
    ax.set_yscale("log")
    ax.set_xlabel("factor count")
    ax.set_ylabel("product overlap")
    ax.legend()


def _draw_single(result: ExperimentResult, ax) -> None:
    row = result.rows[0]
    ax.errorbar([row.parameter], [row.estimate.mean], yerr=[row.estimate.stderr],
                fmt="o", capsize=4, label="sampled")
    if row.analytic is not None:
        ax.axhline(row.analytic, linestyle="--", label="reference")
    quadrature = result.extras.get("quadrature_value")
    if quadrature is not None:
        ax.axhline(quadrature, linestyle=":", label="quadrature")
    ax.set_xticks([row.parameter])
    ax.set_xlabel("pair")
    ax.set_ylabel("overlap")
    ax.legend()


def write_figure(result: ExperimentResult, path) -> None:
    """Render the result to an SVG with no embedded creation date."""
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    if result.name == "bound":
        _draw_bound(result, ax)
    elif result.name == "product-decay":
        _draw_decay(result, ax)
    elif result.name in ("counterexample", "overlap"):
        _draw_single(result, ax)
    else:
        _draw_curve(result, ax)
    ax.set_title(result.name)
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
