"""Figure rendering for simulation CSV output.

Reads the delimited rows produced by the simulator and renders comparison
figures (empirical rates with confidence intervals against the exact
bounds) to image files next to the CSV.  Everything here is presentation
only; the CSV stays the data boundary.
"""

from __future__ import annotations

import csv
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _safe_log10(x: float, floor: float = -12.0) -> float:
    if x <= 0:
        return floor
    return max(math.log10(x), floor)


def read_csv_rows(csv_path: str) -> list[dict]:
    with open(csv_path, newline="") as fh:
        return [row for row in csv.DictReader(fh)]


def render_figures(csv_path: str, out_dir: str) -> list[str]:
    """Render all figures for a simulation CSV; returns written paths."""
    rows = read_csv_rows(csv_path)
    if not rows:
        raise ValueError(f"no data rows in {csv_path}")
    os.makedirs(out_dir, exist_ok=True)
    written = [
        _render_dfr_figure(rows, os.path.join(out_dir, "dfr_vs_bounds.png")),
        _render_event_figure(rows, os.path.join(out_dir, "event_rates.png")),
    ]
    return written


def _labels(rows: list[dict]) -> list[str]:
    return [
        f"q{r['q']} m{r['m']} [{r['n']},{r['k']}] w{r['w']} t{r['t']}\n{r['error_mode']}"
        for r in rows
    ]


def _render_dfr_figure(rows: list[dict], path: str) -> str:
    xs = range(len(rows))
    dfr = [_safe_log10(float(r["dfr_rate"])) for r in rows]
    lo = [_safe_log10(float(r["ci_lo"])) for r in rows]
    hi = [_safe_log10(float(r["ci_hi"])) for r in rows]
    total = [_safe_log10(float(r["total_bound"])) for r in rows]

    fig, ax = plt.subplots(figsize=(max(6, 1.6 * len(rows)), 4.5))
    yerr = [[d - l for d, l in zip(dfr, lo)], [h - d for d, h in zip(dfr, hi)]]
    ax.errorbar(xs, dfr, yerr=yerr, fmt="o", capsize=4, label="empirical DFR (CI)")
    ax.plot(xs, total, "s--", color="tab:red", label="total bound")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(_labels(rows), fontsize=8)
    ax.set_ylabel("log10(rate)")
    ax.set_title("Decoding failure rate vs. exact bound")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _render_event_figure(rows: list[dict], path: str) -> str:
    panels = [
        ("event_a_count", "span_bound", "syndrome span deficient"),
        ("event_b_count", "intersection_bound", "intersection too large"),
        ("event_c_count", "product_dim_bound", "product dimension deficient"),
    ]
    fig, axes = plt.subplots(1, 3, figsize=(max(12, 3.2 * len(rows)), 4.2), sharey=True)
    xs = list(range(len(rows)))
    for ax, (count_col, bound_col, title) in zip(axes, panels):
        rates = [
            _safe_log10(int(r[count_col]) / int(r["trials"])) for r in rows
        ]
        bound = [_safe_log10(float(r[bound_col])) for r in rows]
        ax.plot(xs, rates, "o", label="empirical")
        ax.plot(xs, bound, "s--", color="tab:red", label="bound")
        ax.set_xticks(xs)
        ax.set_xticklabels(_labels(rows), fontsize=7)
        ax.set_title(title, fontsize=10)
        ax.grid(True, alpha=0.3)
    axes[0].set_ylabel("log10(rate)")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
