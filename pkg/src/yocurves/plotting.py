"""Figure rendering for generated curves (file output only, Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _segments(curve):
    """Contiguous index runs between near-pole samples."""
    n = len(curve.xs)
    runs, run = [], []
    for i in range(n):
        if curve.near_pole[i]:
            if len(run) >= 2:
                runs.append(run)
            run = []
        else:
            run.append(i)
    if len(run) >= 2:
        runs.append(run)
    return runs


def _plot_curve(ax, curve, color, label):
    first = True
    for run in _segments(curve):
        pts = curve.r3[run]
        ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], color=color,
                linewidth=1.2, label=label if first else None)
        first = False


def save_curve_figure(curve, path, dpi: int = 150, elev: float = 22.0,
                      azim: float = -60.0) -> str:
    """Render the curve (and its companion, when present) to an image file."""
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    _plot_curve(ax, curve, "tab:orange", "primary")
    if curve.companion is not None:
        _plot_curve(ax, curve.companion, "tab:purple", "companion")
        ax.legend(loc="upper right")
    md = curve.metadata
    bits = []
    if md.get("p") is not None:
        bits.append(f"p={md['p']}, q={md['q']}")
    bits.append(f"k={md.get('k'):g}")
    bits.append(f"lam={md.get('lam'):g}")
    ax.set_title(", ".join(bits))
    # equal aspect so knots are not sheared
    pts = curve.r3[~curve.near_pole]
    if curve.companion is not None:
        pts = np.vstack([pts, curve.companion.r3[~curve.companion.near_pole]])
    center = 0.5 * (pts.max(axis=0) + pts.min(axis=0))
    radius = 0.5 * float((pts.max(axis=0) - pts.min(axis=0)).max()) or 1.0
    ax.set_xlim(center[0] - radius, center[0] + radius)
    ax.set_ylim(center[1] - radius, center[1] + radius)
    ax.set_zlim(center[2] - radius, center[2] + radius)
    ax.set_box_aspect((1, 1, 1))
    ax.view_init(elev=elev, azim=azim)
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return str(path)
