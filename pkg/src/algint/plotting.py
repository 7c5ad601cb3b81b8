"""Matplotlib figure rendering for the CLI report path.

Figures are written next to the delimited artifacts with the Agg backend and
stripped metadata so repeated runs produce identical bytes.
"""

import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import mpmath as mp

from . import measures

_PNG_KW = dict(dpi=110, metadata={"Software": None})


def _support_outline(ax, spec):
    try:
        pts = measures.support_points(spec, 720)
    except Exception:
        return
    xs = [p.real for p in pts]
    ys = [p.imag for p in pts]
    ax.plot(xs, ys, ".", ms=1.0, color="0.65", zorder=1, label="support")


def save_roots_figure(roots, spec, path, title="roots"):
    zs = list(getattr(roots, "roots", roots))
    xs = [float(mp.re(z)) for z in zs]
    ys = [float(mp.im(z)) for z in zs]
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    _support_outline(ax, spec)
    ax.scatter(xs, ys, s=9, color="tab:blue", zorder=2, label="roots")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(title)
    ax.axhline(0.0, color="0.85", lw=0.6, zorder=0)
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_histogram_figure(rows, path, title="root histogram"):
    """rows: (bin_left, bin_right, count, target_mass) from verify.histogram_rows."""
    lefts = [r[0] for r in rows]
    widths = [r[1] - r[0] for r in rows]
    counts = [r[2] for r in rows]
    total = sum(counts) or 1
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    ax.bar(lefts, counts, width=widths, align="edge", color="tab:blue",
           alpha=0.75, label="roots per bin")
    if any(r[3] for r in rows):
        target = [r[3] * total for r in rows]
        centers = [r[0] + (r[1] - r[0]) / 2 for r in rows]
        ax.plot(centers, target, color="tab:red", lw=1.4,
                label="target mass x n")
    ax.set_xlabel("x")
    ax.set_ylabel("count")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_mapped_angles_figure(roots, path, title="mapped root angles"):
    """Angles of z^2 - 1 over the roots against the uniform law (lemniscate
    diagnostics)."""
    zs = list(getattr(roots, "roots", roots))
    angles = sorted((math.atan2(float(mp.im(z * z - 1)), float(mp.re(z * z - 1)))
                     / (2 * math.pi)) % 1.0 for z in zs)
    n = len(angles)
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.plot(angles, [(+0.5 + i) / n for i in range(n)], drawstyle="steps-post",
            label="empirical CDF")
    ax.plot([0, 1], [0, 1], color="tab:red", lw=1.0, label="uniform")
    ax.set_xlabel("angle / 2 pi")
    ax.set_ylabel("CDF")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_points_figure(points, spec, path, title="sample plan"):
    xs = [float(mp.re(z)) for z in points]
    ys = [float(mp.im(z)) for z in points]
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    _support_outline(ax, spec)
    ax.scatter(xs, ys, s=9, color="tab:green", zorder=2, label="plan points")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(title)
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)


def save_gs_norms_figure(gs_norms, path, title="Gram-Schmidt profile"):
    vals = [float(mp.log(g)) for g in gs_norms]
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(range(len(vals)), vals, lw=1.2)
    ax.set_xlabel("index")
    ax.set_ylabel("log ||b_i*||")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KW)
    plt.close(fig)
