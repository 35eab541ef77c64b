"""Report figures rendered next to the delimited output files.

Headless-safe: the Agg backend is forced before pyplot loads, so the
CLI can render on machines without a display server.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .energy import EnergyBreakdown, SweepRow, VOLTAGE_AXIS
from .montecarlo import McSummary, normal_quantiles

_DPI = 150


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_energy_table(rows: Sequence[EnergyBreakdown], path: str | Path) -> Path:
    """Per-vector synapse energy against the benchmark, savings overlaid."""
    labels = [r.vector or str(i + 1) for i, r in enumerate(rows)]
    x = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=(max(6.0, 0.6 * len(rows)), 4.0))
    width = 0.38
    ax.bar(x - width / 2, [r.e_acn_syn_fJ for r in rows], width, label="adiabatic")
    ax.bar(x + width / 2, [r.e_ccn_fJ for r in rows], width, label="benchmark")
    ax.set_yscale("log")
    ax.set_xticks(x, labels, rotation=60, fontsize=8)
    ax.set_ylabel("energy per operation (fJ)")
    ax.legend(loc="upper left")
    twin = ax.twinx()
    twin.plot(x, [r.savings_pct for r in rows], "k.-", lw=1, label="savings")
    twin.set_ylabel("savings (%)")
    twin.set_ylim(0, 100)
    fig.tight_layout()
    return _save(fig, path)


def plot_sweep(rows: Sequence[SweepRow], path: str | Path) -> Path:
    """Savings trajectory per vector along the sweep axis."""
    by_vector: dict[str, list[SweepRow]] = {}
    for row in rows:
        by_vector.setdefault(row.breakdown.vector, []).append(row)
    voltage = rows[0].axis == VOLTAGE_AXIS if rows else True
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, series in by_vector.items():
        xs = [r.axis_value if voltage else r.axis_value / 1e6 for r in series]
        ax.plot(xs, [r.breakdown.savings_pct for r in series], ".-", label=name)
    ax.set_xlabel("supply (V)" if voltage else "nominal clock (MHz)")
    if not voltage:
        ax.set_xscale("log")
    ax.set_ylabel("savings (%)")
    if len(by_vector) <= 12:
        ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_mc(samples: np.ndarray, summary: McSummary, path: str | Path,
            title: str = "") -> Path:
    """Histogram plus normal quantile-quantile panel for one sample set."""
    samples = np.asarray(samples, dtype=float)
    fig, (left, right) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    left.hist(samples, bins=40, color="#4477aa", edgecolor="white")
    left.set_xlabel("energy per operation (fJ)")
    left.set_ylabel("draws")
    left.set_title(f"cv {summary.cv:.2f}%  skew {summary.skewness:.2f}")

    q = normal_quantiles(samples.size)
    ordered = np.sort(samples)
    right.plot(q, ordered, ".", ms=3, color="#4477aa")
    # the line a normal sample would follow
    right.plot(q, summary.mean_fJ + summary.std_fJ * q, "k-", lw=1)
    right.set_xlabel("normal quantile")
    right.set_ylabel("ordered sample (fJ)")
    right.set_title(f"qq correlation {summary.qq_corr:.4f}")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return _save(fig, path)
