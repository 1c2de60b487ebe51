"""
Static figures: atlas maps (SVG via matplotlib, PNG via Pillow) and
obstruction-curve overlays.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402
from PIL import Image  # noqa: E402

from app.frames.atlas import LABELS, AtlasGrid  # noqa: E402
from app.frames.obstructions import ObstructionCurve  # noqa: E402

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# A region (explicit frame rules), B region, conditional strips, obstructions
LABEL_COLORS: Dict[str, str] = {
    "NotFrame_aGeN": "#7f7f7f",
    "NotFrame_abGe1": "#bdbdbd",
    "NotFrame_bInteger": "#000000",
    "Frame_bSmall": "#1f77b4",
    "Frame_RegionB": "#2ca02c",
    "Frame_PropIV_k": "#17becf",
    "Frame_PropV": "#9467bd",
    "Frame_PropVI": "#aec7e8",
    "Frame_Oversampling": "#98df8a",
    "ConditionalOnStrip": "#ff7f0e",
    "Unknown": "#ffffff",
}

SVG_METADATA = {"Date": None, "Creator": None}


def _deterministic_svg() -> None:
    plt.rcParams["svg.hashsalt"] = "gabor-frames"


def _hex_to_rgb(color: str) -> Tuple[int, int, int]:
    color = color.lstrip("#")
    return int(color[0:2], 16), int(color[2:4], 16), int(color[4:6], 16)


def label_indices(grid: AtlasGrid) -> np.ndarray:
    """Label matrix as indices into LABELS; row 0 is the lowest b."""
    index = {label: i for i, label in enumerate(LABELS)}
    return np.array([[index[label] for label in row] for row in grid.label_matrix()], dtype=np.int16)


def atlas_svg(grid: AtlasGrid, path: PathLike) -> Path:
    _deterministic_svg()
    path = Path(path)
    cmap = ListedColormap([LABEL_COLORS[label] for label in LABELS])
    amin, amax = (float(v) for v in grid.a_range)
    bmin, bmax = (float(v) for v in grid.b_range)

    fig, ax = plt.subplots(figsize=(7, 6))
    ax.imshow(
        label_indices(grid),
        cmap=cmap,
        vmin=-0.5,
        vmax=len(LABELS) - 0.5,
        origin="lower",
        extent=(amin, amax, bmin, bmax),
        aspect="auto",
        interpolation="nearest",
    )
    a_line = np.linspace(max(amin, 1e-3), amax, 400)
    with np.errstate(divide="ignore"):
        ax.plot(a_line, 1 / a_line, color="black", linewidth=0.8)
    ax.set_xlim(amin, amax)
    ax.set_ylim(bmin, bmax)
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_title(f"B_{grid.N}: {grid.resolution}x{grid.resolution} cells")
    present = [label for label in LABELS if label in grid.counts()]
    ax.legend(
        handles=[Patch(facecolor=LABEL_COLORS[label], edgecolor="black", label=label) for label in present],
        loc="upper right",
        fontsize=7,
    )
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.info(f"atlas_svg: wrote {path}")
    return path


def atlas_png(grid: AtlasGrid, path: PathLike, cell_pixels: int = 4) -> Path:
    """One cell_pixels x cell_pixels block per cell, b increasing upwards."""
    path = Path(path)
    palette = np.array([_hex_to_rgb(LABEL_COLORS[label]) for label in LABELS], dtype=np.uint8)
    rgb = palette[label_indices(grid)][::-1]
    image = Image.fromarray(np.ascontiguousarray(rgb), mode="RGB")
    size = (grid.resolution * cell_pixels, grid.resolution * cell_pixels)
    image.resize(size, resample=Image.NEAREST).save(path, format="PNG")
    logger.info(f"atlas_png: wrote {path}")
    return path


def _curve_samples(curve: ObstructionCurve, points: int = 200) -> Tuple[np.ndarray, np.ndarray]:
    lo, hi = float(curve.domain.lo), float(curve.domain.hi)
    a = np.linspace(lo, hi, points)
    return a, curve.n / (float(curve.gap) + (curve.n + 1) * a)


def curves_svg(curves: Sequence[ObstructionCurve], alpha: float, path: PathLike) -> Path:
    """Candidate curves over the rectangle alpha <= a < 2 alpha, 0 < b < 1/a."""
    _deterministic_svg()
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 5))
    a_line = np.linspace(alpha, 2 * alpha, 400)
    ax.fill_between(a_line, 0, 1 / a_line, color="#f0f0f0", label="0 < b < 1/a")
    ax.plot(a_line, 1 / a_line, color="black", linewidth=0.8)
    styles = {"plus_hits_zero": "-", "minus_hits_zero": "--", "paired_blowup": ":"}
    drawn: List[str] = []
    for curve in curves:
        a, b = _curve_samples(curve)
        label = curve.kind if curve.kind not in drawn else None
        drawn.append(curve.kind)
        ax.plot(a, b, styles[curve.kind], linewidth=1.2 if curve.blowup_possible else 0.6, label=label)
    ax.set_xlim(alpha, 2 * alpha)
    ax.set_ylim(0, 1 / alpha)
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_title(f"{len(curves)} candidate obstruction curves")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.info(f"curves_svg: wrote {path} ({len(curves)} curves)")
    return path
