"""Delimited report output and the figures rendered alongside it."""

from __future__ import annotations

import io
import os
from typing import Iterable, Sequence

from .bounds import BoundReport

CSV_HEADER = (
    "bound", "trial", "seed", "dA", "d", "eps", "eps_provenance",
    "lhs_bits", "rhs_bits", "margin_bits", "violated",
)

TIGHTNESS_HEADER = ("x", "log2_d", "beta_upper", "lhs_Q", "rhs_QC", "ratio")


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def report_row(r: BoundReport) -> tuple:
    return (
        r.bound, r.trial, r.seed, r.d_a, r.d, r.eps, r.eps_provenance,
        r.lhs, r.rhs, r.margin, r.violated,
    )


def render_table(header: Sequence[str], rows: Iterable[Sequence], fmt_char: str = ",") -> str:
    out = io.StringIO()
    out.write(fmt_char.join(header) + "\n")
    for row in rows:
        out.write(fmt_char.join(fmt(v) for v in row) + "\n")
    return out.getvalue()


def reports_csv(reports: Iterable[BoundReport], delimiter: str = ",") -> str:
    return render_table(CSV_HEADER, (report_row(r) for r in reports), delimiter)


def tightness_csv(rows: Iterable[dict], delimiter: str = ",") -> str:
    return render_table(
        TIGHTNESS_HEADER,
        ((r["x"], r["log2_d"], r["beta_upper"], r["lhs_Q"], r["rhs_QC"], r["ratio"]) for r in rows),
        delimiter,
    )


def figure_path(out_path: str) -> str:
    stem, _ = os.path.splitext(out_path)
    return stem + ".png"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_margin_figure(reports: Sequence[BoundReport], png_path: str) -> None:
    """Histogram of margins with the violation threshold marked."""
    plt = _pyplot()
    margins = [r.margin for r in reports]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.hist(margins, bins=min(60, max(10, len(margins) // 8)), color="#31708f")
    slack = reports[0].slack if reports else 1e-7
    ax.axvline(-slack, color="crimson", linestyle="--", label="violation threshold")
    ax.set_xlabel("margin = rhs - lhs (bits)")
    ax.set_ylabel("trials")
    names = sorted({r.bound for r in reports})
    ax.set_title("margins: " + ", ".join(names))
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def render_tightness_figure(rows: Sequence[dict], png_path: str) -> None:
    """Tightness ratio against the offset, one curve per dimension."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    by_dim: dict[float, list[tuple[float, float]]] = {}
    for r in rows:
        by_dim.setdefault(r["log2_d"], []).append((r["x"], r["ratio"]))
    for log2_d, pts in sorted(by_dim.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts],
                marker="o", label=f"log2 d = {log2_d:g}")
    ax.set_xscale("log")
    ax.set_xlabel("erasure offset x")
    ax.set_ylabel("achieved / bound ratio")
    ax.set_ylim(0.0, 1.05)
    ax.axhline(1.0, color="gray", linewidth=0.8)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
