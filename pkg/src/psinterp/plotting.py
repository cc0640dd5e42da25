"""Bar charts of benchmark summaries, rendered off-screen to PNG."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np
from matplotlib.figure import Figure

from .bench import BenchRecord, summarize
from .decimation import DecimationScheme

__all__ = ["metric_figure", "save_figures"]

_METRICS = {"psnr": ("psnr_mean", "psnr_std", "PSNR (dB)"), "ssim": ("ssim_mean", "ssim_std", "SSIM")}


def _label(scheme: str) -> str:
    try:
        return DecimationScheme(scheme).label
    except ValueError:
        return scheme


def metric_figure(records: Sequence[BenchRecord], metric: str) -> Figure:
    """Grouped bars: one group per scheme, one bar per (wavelet, factor)."""
    mean_key, std_key, ylabel = _METRICS[metric]
    rows = summarize(records)
    schemes = list(dict.fromkeys(r["scheme"] for r in rows))
    series = list(dict.fromkeys((r["wavelet"], r["factor"]) for r in rows))
    lookup = {(r["scheme"], r["wavelet"], r["factor"]): r for r in rows}

    fig = Figure(figsize=(max(4.0, 1.4 * len(schemes) + 1.5), 3.6), layout="constrained")
    ax = fig.add_subplot()
    x = np.arange(len(schemes))
    width = 0.8 / max(len(series), 1)
    for k, (wavelet, factor) in enumerate(series):
        means, stds = [], []
        for s in schemes:
            row = lookup.get((s, wavelet, factor))
            means.append(row[mean_key] if row else np.nan)
            stds.append(row[std_key] if row else np.nan)
        ax.bar(x + (k - (len(series) - 1) / 2) * width, means, width, yerr=stds, capsize=3,
               label=f"{wavelet}, x{factor}")
    ax.set_xticks(x, [_label(s) for s in schemes])
    ax.set_ylabel(ylabel)
    if series:
        ax.legend(fontsize="small")
    return fig


def save_figures(records: Sequence[BenchRecord], report_path) -> list[Path]:
    """Write ``<stem>_psnr.png`` and ``<stem>_ssim.png`` next to the report."""
    report_path = Path(report_path)
    written = []
    for metric in _METRICS:
        out = report_path.with_name(f"{report_path.stem}_{metric}.png")
        metric_figure(records, metric).savefig(out, dpi=100)
        written.append(out)
    return written
