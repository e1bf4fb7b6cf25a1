"""SVG rendering with byte-reproducible output."""

from __future__ import annotations

import io
from fractions import Fraction
from typing import Iterable, Sequence

import matplotlib
from matplotlib.figure import Figure

from .hn import Polygon

_RC = {
    "svg.hashsalt": "gaugehn",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "font.size": 9,
}
_META = {"Date": None, "Creator": None}


def _svg(fig: Figure) -> bytes:
    buf = io.BytesIO()
    with matplotlib.rc_context(_RC):
        fig.savefig(buf, format="svg", metadata=_META)
    return buf.getvalue()


def polygon_svg(poly: Polygon, baseline, points: Iterable[tuple[int, int]], title: str) -> bytes:
    """The polygon, the line of slope ``baseline`` through the origin and
    the subobject points."""
    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(4.5, 3.5))
        ax = fig.add_subplot()
        pts = sorted(set(points))
        if pts:
            ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=14, color="0.55",
                       zorder=2, label="subobjects")
        xs = [x for x, _ in poly.vertices]
        ys = [float(y) for _, y in poly.vertices]
        ax.plot(xs, ys, marker="o", color="C0", zorder=3, label="HN polygon")
        ax.plot([0, poly.length], [0, float(baseline) * poly.length], ls="--", color="C3",
                label=f"slope {baseline}")
        ax.set_xlabel("rank")
        ax.set_ylabel("degree")
        ax.set_title(title)
        ax.set_xticks(range(poly.length + 1))
        ax.grid(alpha=0.3)
        ax.legend(loc="best", fontsize=7)
        fig.tight_layout()
    return _svg(fig)


def margins_svg(rows: Sequence[dict]) -> bytes:
    """Histogram of the gap between the optimum and the best competitor."""
    with matplotlib.rc_context(_RC):
        fig = Figure(figsize=(5, 3.2))
        ax = fig.add_subplot()
        kinds = sorted({r["kind"] for r in rows})
        for i, kind in enumerate(kinds):
            vals = [float(Fraction(r["margin"])) for r in rows
                    if r["kind"] == kind and r["margin"] is not None]
            if vals:
                ax.hist(vals, bins=30, alpha=0.6, color=f"C{i}", label=kind)
        ax.set_xlabel("best energy minus runner-up")
        ax.set_ylabel("instances")
        ax.set_title("optimality margins")
        if kinds:
            ax.legend(fontsize=7)
        fig.tight_layout()
    return _svg(fig)
