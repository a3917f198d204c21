"""Figure rendering for reports: persistence diagrams and cost profiles.

Figures are drawn straight onto Agg canvases (no pyplot state), so the
CLI can emit SVG or PNG files from headless runs.  Diagram conventions:
squares for 0-cycles, triangles for 1-cycles, circles for 2-cycles, a
dashed diagonal, and a shaded band of half-width c along it when a
confidence band is supplied.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .diagram_analysis import ConfidenceBand
from .persistence import PersistenceDiagram

_MARKERS = {0: "s", 1: "^", 2: "o"}
_COLORS = {0: "tab:blue", 1: "tab:red", 2: "tab:green"}


def plot_persistence_diagram(
    diagram: PersistenceDiagram,
    path,
    band: Optional[ConfidenceBand] = None,
    title: Optional[str] = None,
) -> None:
    """Render the diagram (and optional noise band) to an image file."""
    fig = Figure(figsize=(5.0, 5.0))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    top = diagram.delta_max * 1.05 if diagram.delta_max > 0 else 1.0
    xs = np.array([0.0, top])

    if band is not None:
        ax.fill_between(
            xs,
            xs,
            xs + 2 * band.c,
            color="lightcoral",
            alpha=0.45,
            linewidth=0,
            label=f"noise band (2c = {2 * band.c:.3g})",
        )
    ax.plot(xs, xs, "k--", linewidth=0.8)
    ax.axhline(
        diagram.delta_max, color="gray", linewidth=0.6, linestyle=":", zorder=0
    )

    for dim in range(diagram.maxdim + 1):
        births, deaths = diagram.in_dim(dim)
        if births.size == 0:
            continue
        ax.scatter(
            births,
            np.minimum(deaths, diagram.delta_max),
            marker=_MARKERS.get(dim, "x"),
            s=28,
            facecolors="none",
            edgecolors=_COLORS.get(dim, "k"),
            label=f"{dim}-cycles",
        )
    ax.set_xlim(-0.02 * top, top)
    ax.set_ylim(-0.02 * top, top)
    ax.set_xlabel("birth diameter")
    ax.set_ylabel("death diameter")
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)


def plot_bench(rows, path) -> None:
    """Two-panel cost profile: wall time and simplex counts vs N."""
    fig = Figure(figsize=(9.0, 4.0))
    FigureCanvasAgg(fig)
    ax_t, ax_s = fig.subplots(1, 2)
    maxdims = sorted({r["maxdim"] for r in rows})
    for md in maxdims:
        sub = [r for r in rows if r["maxdim"] == md and r["status"] == "OK"]
        ns = [r["n"] for r in sub]
        ax_t.plot(ns, [r["t_total_s"] for r in sub], "o-", label=f"maxdim={md}")
        ax_s.plot(ns, [r["simplices_total"] for r in sub], "o-", label=f"maxdim={md}")
    for ax, ylab in ((ax_t, "wall time [s]"), (ax_s, "number of simplices")):
        ax.set_xlabel("sample size N")
        ax.set_ylabel(ylab)
        ax.set_yscale("log")
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
