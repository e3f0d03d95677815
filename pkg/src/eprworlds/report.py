"""Deterministic figure and table emitters.

Every plot goes out as an SVG rendered through matplotlib plus a CSV twin
holding the same numbers, so downstream checks never parse SVG. Output is
byte-reproducible: the SVG hash salt is pinned and the date metadata is
stripped.
"""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Circle, Polygon as MplPolygon, Wedge as MplWedge

from .actualization import ActPointer
from .bell import BellReport, bell_terms
from .branching import BranchDistribution
from .geometry import DISK_RADIUS, Partition
from .models import ANALYTIC_MODELS, curve_table

_SVG_SALT = "eprworlds"

# (11) stays pure green; the others are fixed so diffs stay stable.
LABEL_COLORS = {
    "00": "#3b6bc9",
    "01": "#6f6f6f",
    "10": "#c98a3b",
    "11": "#00b200",
}
PARTIAL_EDGE = "#d04040"
MODEL_STYLES = {
    "classical_C": {"color": "#222222", "lw": 1.5, "label": "classical C"},
    "quantum_P": {"color": "#1f5fd0", "lw": 2.5, "label": "quantum P"},
    "transition_Pstar": {"color": "#d02020", "lw": 1.8, "label": "transition P*"},
}


def _new_figure(figsize=(6.0, 6.0)):
    plt.rcParams["svg.hashsalt"] = _SVG_SALT
    return plt.subplots(figsize=figsize)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    kwargs = {}
    if path.suffix.lower() == ".svg":
        kwargs["metadata"] = {"Date": None}
    fig.savefig(path, **kwargs)
    plt.close(fig)
    return path


def _write_csv(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    path.write_text(buf.getvalue())
    return path


def render_cross_section(partition: Partition, svg_path: str | Path,
                         csv_path: str | Path | None = None,
                         act: ActPointer | None = None) -> Path:
    """Draw a partition's regions, color-keyed by outcome label.

    Arc partitions are shown as filled sectors, cell partitions as their
    polygons with clipped cells stroked in red. An optional actualization
    pointer is overlaid as a red arrow (angle mode) or dot (point mode).
    """
    fig, ax = _new_figure()
    ax.set_aspect("equal")
    lim = DISK_RADIUS * 1.12
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.axis("off")
    for region in partition.regions:
        color = LABEL_COLORS[region.label.key]
        if region.arc is not None:
            ax.add_patch(MplWedge(
                (0, 0), DISK_RADIUS,
                math.degrees(region.arc[0]), math.degrees(region.arc[1]),
                facecolor=color, edgecolor="white", linewidth=0.4, alpha=0.85,
            ))
        elif region.vertices is not None:
            ax.add_patch(MplPolygon(
                list(region.vertices), closed=True, facecolor=color,
                edgecolor=PARTIAL_EDGE if region.partial else "white",
                linewidth=0.5 if region.partial else 0.2,
            ))
    ax.add_patch(Circle((0, 0), DISK_RADIUS, fill=False,
                        edgecolor="black", linewidth=1.0))
    if act is not None:
        if act.mode == "angle":
            ax.annotate(
                "", xy=(DISK_RADIUS * math.cos(act.angle),
                        DISK_RADIUS * math.sin(act.angle)),
                xytext=(0, 0),
                arrowprops={"color": "red", "width": 1.5, "headwidth": 7},
            )
        else:
            ax.plot([act.x], [act.y], marker="o", color="red", markersize=6)
    ax.set_title(f"{partition.kind} partition, delta = {partition.delta:.4f} rad")
    out = _save(fig, svg_path)
    if csv_path is not None:
        rows = []
        for i, region in enumerate(partition.regions):
            rows.append([
                i, region.label.key, region.label.klass,
                int(region.partial), f"{region.measure:.12g}",
            ])
        _write_csv(csv_path, ["index", "label", "klass", "partial", "measure"], rows)
    return out


def render_curves(csv_path: str | Path, svg_path: str | Path | None = None,
                  models=ANALYTIC_MODELS, points: int = 91,
                  bars_model: str = "quantum_P") -> Path:
    """Sweep p(E)/p(U) over delta in [0, pi/2] for the requested models.

    The CSV twin (delta, model, pE, pU) is always written, even for an empty
    model list; the figure adds the three inequality terms of ``bars_model``
    as bars next to the curves.
    """
    deltas = np.linspace(0.0, math.pi / 2, points)
    rows = []
    tables = {}
    for model in models:
        table = curve_table(model, deltas)
        tables[model] = table
        for delta, p_e, p_u in table:
            rows.append([f"{delta:.12g}", model, f"{p_e:.12g}", f"{p_u:.12g}"])
    out_csv = _write_csv(csv_path, ["delta", "model", "pE", "pU"], rows)
    if svg_path is None:
        return out_csv
    plt.rcParams["svg.hashsalt"] = _SVG_SALT
    fig, (ax, axb) = plt.subplots(
        1, 2, figsize=(9.0, 4.5), gridspec_kw={"width_ratios": [2.2, 1.0]}
    )
    for model in models:
        style = MODEL_STYLES.get(model, {"color": "#888888", "lw": 1.0, "label": model})
        table = tables[model]
        ax.plot([r[0] for r in table], [r[1] for r in table],
                color=style["color"], lw=style["lw"], label=style["label"])
    ax.set_xlabel("relative angle delta (rad)")
    ax.set_ylabel("p(E)")
    ax.set_xlim(0, math.pi / 2)
    ax.set_ylim(0, 1)
    secax = ax.secondary_yaxis(
        "right", functions=(lambda y: 1 - y, lambda y: 1 - y))
    secax.set_ylabel("p(U)")
    if models:
        ax.legend(loc="upper left", fontsize=8)
    try:
        report = bell_terms(bars_model)
        axb.bar(["P1(U)", "P2(E)", "P3(U)"], list(report.terms), color="#1f5fd0")
        axb.axhline(report.t2 + report.t3, color="#d02020", lw=1.0, ls="--")
        axb.set_ylim(0, 1)
        axb.set_title(f"inequality terms ({bars_model})", fontsize=9)
    except ValueError:
        axb.axis("off")
    fig.tight_layout()
    return _save(fig, svg_path)


def render_bell(report: BellReport, svg_path: str | Path,
                csv_path: str | Path | None = None) -> Path:
    """Bar chart of the three inequality terms with the margin annotated."""
    fig, ax = _new_figure(figsize=(4.5, 4.0))
    names = ["P1(U)", "P2(E)", "P3(U)"]
    ax.bar(names, list(report.terms), color="#1f5fd0")
    ax.axhline(report.t2 + report.t3, color="#d02020", lw=1.0, ls="--",
               label="bound t2 + t3")
    ax.set_ylim(0, 1)
    ax.set_title(
        f"margin = {report.margin:+.6f} ({report.verdict})", fontsize=10)
    ax.legend(fontsize=8)
    out = _save(fig, svg_path)
    if csv_path is not None:
        rows = [[n, f"{t:.12g}"] for n, t in zip(names, report.terms)]
        rows.append(["margin", f"{report.margin:.12g}"])
        _write_csv(csv_path, ["term", "value"], rows)
    return out


def render_branch(dist: BranchDistribution, svg_path: str | Path,
                  csv_path: str | Path | None = None) -> Path:
    """World counts by E-occurrence as a bar chart plus table."""
    fig, ax = _new_figure(figsize=(5.0, 4.0))
    rows = dist.rows()
    ax.bar([r for r, _, _ in rows], [q for _, q, _ in rows], color="#3b6bc9")
    ax.set_xlabel("E-outcomes in the record (r)")
    ax.set_ylabel("worlds")
    ax.set_title(f"i={dist.i}, branches per run: {dist.n_e}E + {dist.n_u}U")
    out = _save(fig, svg_path)
    if csv_path is not None:
        _write_csv(
            csv_path, ["r", "worlds", "fraction"],
            [[r, q, f"{f:.12g}"] for r, q, f in rows],
        )
    return out
