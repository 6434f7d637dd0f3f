"""Render benchmark reports as figures, for the bench report directory."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from pathlib import Path

_STYLE = {
    "figure.figsize": (7.0, 4.0),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def ratio_figure(report):
    """Horizontal bars of bits/base per file against the 2.0 floor."""
    names = [r.name for r in report.rows]
    ratios = [r.bits_per_base for r in report.rows]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.barh(names, ratios, color="#4878a8")
        ax.axvline(2.0, color="#b04030", linestyle="--", linewidth=1,
                   label="2.0 bits/base floor")
        if report.external:
            ext = [(r.name, r.ext_bits_per_base) for r in report.rows
                   if r.ext_bits_per_base is not None]
            if ext:
                ax.scatter([v for _, v in ext], [n for n, _ in ext],
                           color="#303030", marker="x", label="external")
        ax.set_xlabel("bits per base")
        ax.invert_yaxis()
        ax.legend(loc="lower right", fontsize=8)
        fig.tight_layout()
    return fig


def timing_figure(report):
    """Encode and decode wall time against input size, log-log."""
    sizes = [r.bases for r in report.rows]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.loglog(sizes, [r.encode_ms for r in report.rows], "o",
                  color="#4878a8", label="encode")
        ax.loglog(sizes, [r.decode_ms for r in report.rows], "s",
                  color="#58a868", label="decode")
        if report.external:
            ext = [(r.bases, r.ext_ms) for r in report.rows if r.ext_ms is not None]
            if ext:
                ax.loglog([b for b, _ in ext], [t for _, t in ext], "x",
                          color="#303030", label="external")
        ax.set_xlabel("bases")
        ax.set_ylabel("wall time (ms)")
        ax.legend(fontsize=8)
        fig.tight_layout()
    return fig


def render_report_figures(report, out_dir) -> dict:
    """Save the report figures as PNG files; returns name -> path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    if not report.rows:
        return paths
    fig = ratio_figure(report)
    paths["ratio_figure"] = out / "ratio.png"
    fig.savefig(paths["ratio_figure"])
    plt.close(fig)
    if all(r.encode_ms > 0 and r.decode_ms > 0 for r in report.rows):
        fig = timing_figure(report)
        paths["timing_figure"] = out / "timing.png"
        fig.savefig(paths["timing_figure"])
        plt.close(fig)
    return paths
