"""Matplotlib rendering for the report paths.

Each renderer returns PNG bytes so the CLI can write figures atomically next
to the delimited output.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .harness import REPORT_COLUMNS, ConvergenceReport
from .inpaint import RasterImage
from .schemes import BIHARMONIC_L, BIHARMONIC_N, HARMONIC, CompletedField

SCHEME_LABELS = {
    HARMONIC: "harmonic",
    BIHARMONIC_L: "biharmonic (laplacian traces)",
    BIHARMONIC_N: "biharmonic (normal derivatives)",
}
SCHEME_MARKERS = {HARMONIC: "o", BIHARMONIC_L: "s", BIHARMONIC_N: "^"}


def _fig_to_png(fig) -> bytes:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=150, bbox_inches="tight")
    plt.close(fig)
    return buf.getvalue()


def render_convergence(report: ConvergenceReport) -> bytes:
    """Log2 sup error per domain index, one line per scheme."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    idx = [row.i for row in report.rows]
    for scheme, _ in REPORT_COLUMNS:
        logs = report.log2_errors(scheme)
        try:
            label = f"{SCHEME_LABELS[scheme]} (lsq slope {report.slopes(scheme).least_squares:.2f})"
        except ValueError:
            label = SCHEME_LABELS[scheme]
        ax.plot(idx, logs, marker=SCHEME_MARKERS[scheme], label=label)
    ax.set_xlabel("domain index i  (side length $2^{1-i}$)")
    ax.set_ylabel("log2 sup error over the hole")
    ax.set_title(f"{report.fn} surface, n={report.n}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _fig_to_png(fig)


def render_field(field: CompletedField, reference=None) -> bytes:
    """Heatmap of the completed field, plus the error map when a closed-form
    reference ``reference(x, y)`` is supplied."""
    grid = field.grid
    panels = 2 if reference is not None else 1
    fig, axes = plt.subplots(1, panels, figsize=(5.0 * panels, 4.0), squeeze=False)
    extent = None
    if grid is not None:
        extent = (grid.x_min, grid.x_max, grid.y_min, grid.y_max)
    im = axes[0, 0].imshow(field.values, origin="lower", extent=extent, cmap="viridis")
    axes[0, 0].set_title(f"{field.scheme} completion")
    fig.colorbar(im, ax=axes[0, 0])
    if reference is not None:
        nrows, ncols = field.values.shape
        cols, rows = np.meshgrid(np.arange(ncols), np.arange(nrows))
        if grid is not None:
            xs = grid.x_min + cols * grid.h
            ys = grid.y_min + rows * grid.h
        else:
            xs, ys = cols.astype(float), rows.astype(float)
        err = np.abs(field.values - reference(xs, ys))
        err[~field.cls.unknown_mask()] = 0.0
        im = axes[0, 1].imshow(err, origin="lower", extent=extent, cmap="magma")
        axes[0, 1].set_title("absolute error over the hole")
        fig.colorbar(im, ax=axes[0, 1])
    return _fig_to_png(fig)


def _show_image(ax, image: RasterImage, title: str) -> None:
    data = image.samples[:, :, 0] if image.channels == 1 else image.samples / 255.0
    kwargs = {"cmap": "gray", "vmin": 0, "vmax": 255} if image.channels == 1 else {}
    ax.imshow(data, **kwargs)
    ax.set_title(title)
    ax.set_axis_off()


def render_inpaint_panel(
    damaged: RasterImage,
    mask: np.ndarray,
    filled: RasterImage,
    truth: RasterImage | None = None,
) -> bytes:
    """Damaged input (hole blanked), filled output, and the error vs truth."""
    panels = 3 if truth is not None else 2
    fig, axes = plt.subplots(1, panels, figsize=(4.0 * panels, 4.0), squeeze=False)
    blanked = damaged.samples.copy()
    blanked[mask] = 255.0
    _show_image(axes[0, 0], RasterImage.from_array(blanked), "damaged")
    _show_image(axes[0, 1], filled, "filled")
    if truth is not None:
        err = np.abs(filled.samples - truth.samples).max(axis=2)
        err[~mask] = 0.0
        im = axes[0, 2].imshow(err, cmap="magma")
        axes[0, 2].set_title("abs error over the hole")
        axes[0, 2].set_axis_off()
        fig.colorbar(im, ax=axes[0, 2], shrink=0.8)
    return _fig_to_png(fig)
