"""Matplotlib figures for the report path.  All output is deterministic SVG."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bases import BasicNbhd, member_array  # noqa: E402
from .geometry import DEFAULT_TOL, TolerancePolicy  # noqa: E402

plt.rcParams["svg.hashsalt"] = "causaltop"
plt.rcParams["svg.fonttype"] = "path"


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def membership_grid(
    b: BasicNbhd,
    plane: tuple = (0, 1),
    extent: float = 1.0,
    resolution: int = 512,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> np.ndarray:
    """Boolean image of ``b`` on the 2-plane through its centre spanned by coordinates ``plane``.

    Rows run along ``plane[0]`` (bottom to top), columns along ``plane[1]``.
    """
    i, j = plane
    c = np.asarray(b.center.coords, dtype=float)
    ax = np.linspace(-extent, extent, resolution)
    gi, gj = np.meshgrid(ax, ax, indexing="ij")
    qs = np.tile(c, (resolution * resolution, 1))
    qs[:, i] += gi.ravel()
    qs[:, j] += gj.ravel()
    return member_array(b, qs, tol).reshape(resolution, resolution)


def render_nbhd(
    b: BasicNbhd,
    path: Path,
    plane: tuple = (0, 1),
    extent: float | None = None,
    resolution: int = 512,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> Path:
    if extent is None:
        if b.radius:
            extent = 1.5 * b.radius
        elif b.tips is not None:
            extent = float(np.max(np.abs(np.subtract(b.tips[1].coords, b.tips[0].coords))))
        else:
            extent = 1.0
    img = membership_grid(b, plane, extent, resolution, tol)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(img, origin="lower", extent=(-extent, extent, -extent, extent), cmap="Blues",
              vmin=0, vmax=1.4, interpolation="nearest")
    if 0 in plane:
        # light cone through the centre, drawn in the (t, x) plane
        xs = np.array([-extent, extent])
        ax.plot(xs, xs, color="0.3", lw=0.8, ls="--")
        ax.plot(xs, -xs, color="0.3", lw=0.8, ls="--")
    labels = ["t", "x", "y", "z"]
    ax.set_xlabel(f"{labels[plane[1]]} - centre")
    ax.set_ylabel(f"{labels[plane[0]]} - centre")
    ax.set_title(b.describe(), fontsize=8)
    return _save(fig, path)


def render_verdicts(rows: list, row_key: str, col_key: str, path: Path, title: str = "") -> Path:
    """Heatmap of accepted (1) vs refuted (0) verdicts; mismatching cells get an x when rows carry ``match``."""
    row_labels = list(dict.fromkeys(r[row_key] for r in rows))
    col_labels = list(dict.fromkeys(r[col_key] for r in rows))
    grid = np.full((len(row_labels), len(col_labels)), np.nan)
    for r in rows:
        i, j = row_labels.index(r[row_key]), col_labels.index(r[col_key])
        grid[i, j] = 0.0 if r["outcome"] == "Refuted" else 1.0
    fig, ax = plt.subplots(figsize=(1 + 0.55 * len(col_labels), 1.5 + 0.4 * len(row_labels)))
    ax.imshow(grid, cmap="RdYlGn", vmin=0, vmax=1, aspect="auto")
    for r in rows:
        if r.get("match") is False:
            ax.text(col_labels.index(r[col_key]), row_labels.index(r[row_key]), "x", ha="center", va="center")
    ax.set_xticks(range(len(col_labels)), col_labels, rotation=60, ha="right", fontsize=7)
    ax.set_yticks(range(len(row_labels)), row_labels, fontsize=7)
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    return _save(fig, path)


def render_suite_summary(results: list, path: Path) -> Path:
    names = [r.name for r in results]
    fails = [r.failures for r in results]
    checked = [r.checked for r in results]
    fig, ax = plt.subplots(figsize=(7, 0.3 * len(names) + 1))
    y = np.arange(len(names))
    ax.barh(y, checked, color="tab:green", label="checked")
    ax.barh(y, fails, color="tab:red", label="failed")
    ax.set_yticks(y, names, fontsize=7)
    ax.set_xscale("symlog")
    ax.invert_yaxis()
    ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)
