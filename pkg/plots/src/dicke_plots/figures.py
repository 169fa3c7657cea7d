"""Figure construction for the four supported kinds.

Determinism: Agg backend, fixed figure geometry and dpi, bundled default
fonts, and PNG output with the software tag stripped, so identical CSV input
yields byte-identical images.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .csvin import read_csv  # noqa: E402

KINDS = ("g2-vs-lambda", "levels", "g2-surface", "bias-heatmap")
FIGSIZE = (6.4, 4.8)
DPI = 100


class MissingColumnError(KeyError):
    def __init__(self, path, columns):
        self.columns = list(columns)
        super().__init__(f"{path}: missing required columns {self.columns}")

    def __str__(self):
        return self.args[0]


class NoDataError(ValueError):
    pass


@dataclass
class FigureSpec:
    kind: str
    inputs: list
    output: Path
    log_y: bool = True
    title: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"choose one of {', '.join(KINDS)}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        self.inputs = [Path(p) for p in self.inputs]
        self.output = Path(self.output)


def _load(path, required):
    header, rows, metadata = read_csv(path)
    missing = [col for col in required if col not in header]
    if missing:
        raise MissingColumnError(path, missing)
    usable = [row for row in rows if not row.get("error")]
    return usable, metadata


def _finite_xy(rows, x_col, y_col):
    pairs = [(row[x_col], row[y_col]) for row in rows
             if isinstance(row[y_col], (int, float))
             and math.isfinite(row[y_col])]
    if not pairs:
        raise NoDataError(f"no finite ({x_col}, {y_col}) rows to plot")
    xs, ys = zip(*sorted(pairs))
    return np.array(xs), np.array(ys)


def _new_figure():
    return plt.figure(figsize=FIGSIZE, dpi=DPI)


def _render_g2_vs_lambda(spec: FigureSpec):
    rows, _ = _load(spec.inputs[0], ["lambda", "g2"])
    lam, g2 = _finite_xy(rows, "lambda", "g2")
    fig = _new_figure()
    ax = fig.add_subplot(111)
    ax.plot(lam, g2, color="tab:blue", lw=1.5)
    ax.axhline(1.0, color="black", ls="--", lw=1.0)
    ax.axhline(2.0, color="black", ls="-.", lw=1.0)
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(r"$G^{(2)}_N(0)$")
    return fig


def _render_levels(spec: FigureSpec):
    rows, _ = _load(spec.inputs[0], ["lambda", "E0"])
    header = [col for col in rows[0] if col.startswith("E")] if rows else []
    if not rows:
        raise NoDataError("no rows to plot")
    fig = _new_figure()
    ax = fig.add_subplot(111)
    for col in sorted(header):
        lam, energy = _finite_xy(rows, "lambda", col)
        _, ground = _finite_xy(rows, "lambda", "E0")
        ax.plot(lam, energy - ground, lw=1.2, label=col)
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(r"$E_k - E_0$")
    ax.legend(loc="upper right", fontsize=8)
    return fig


def _render_g2_surface(spec: FigureSpec):
    rows, _ = _load(spec.inputs[0], ["lambda", "t", "g2"])
    good = [row for row in rows if isinstance(row["g2"], (int, float))
            and math.isfinite(row["g2"]) and row["g2"] > 0]
    if not good:
        raise NoDataError("no finite positive g2 rows to plot")
    lams = sorted({row["lambda"] for row in good})
    temps = sorted({row["t"] for row in good})
    grid = np.full((len(lams), len(temps)), np.nan)
    lam_index = {v: i for i, v in enumerate(lams)}
    t_index = {v: i for i, v in enumerate(temps)}
    for row in good:
        grid[lam_index[row["lambda"]], t_index[row["t"]]] = row["g2"]
    fig = _new_figure()
    ax = fig.add_subplot(111, projection="3d")
    mesh_t, mesh_lam = np.meshgrid(temps, lams)
    ax.plot_surface(mesh_lam, mesh_t, np.log10(grid), cmap="viridis",
                    rstride=1, cstride=1)
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(r"$T$")
    ax.set_zlabel(r"$\log_{10} G^{(2)}_N(0)$")
    return fig


def _render_bias_heatmap(spec: FigureSpec):
    n_panels = len(spec.inputs)
    n_cols = 1 if n_panels == 1 else 2
    n_rows = (n_panels + n_cols - 1) // n_cols
    fig = plt.figure(figsize=(FIGSIZE[0], FIGSIZE[1] * n_rows / max(n_rows, 1)),
                     dpi=DPI)
    for index, path in enumerate(spec.inputs):
        rows, _ = _load(path, ["t_q", "t_c", "g2"])
        good = [row for row in rows if isinstance(row["g2"], (int, float))
                and math.isfinite(row["g2"]) and row["g2"] > 0]
        if not good:
            raise NoDataError(f"{path}: no finite positive g2 rows to plot")
        tqs = sorted({row["t_q"] for row in good})
        tcs = sorted({row["t_c"] for row in good})
        grid = np.full((len(tqs), len(tcs)), np.nan)
        for row in good:
            grid[tqs.index(row["t_q"]), tcs.index(row["t_c"])] = row["g2"]
        ax = fig.add_subplot(n_rows, n_cols, index + 1)
        mesh = ax.pcolormesh(tcs, tqs, np.log10(grid), cmap="viridis",
                             shading="nearest")
        fig.colorbar(mesh, ax=ax, label=r"$\log_{10} G^{(2)}_N(0)$")
        ax.set_xlabel(r"$T_c$")
        ax.set_ylabel(r"$T_q$")
        lam = good[0].get("lambda")
        if lam is not None:
            ax.set_title(rf"$\lambda = {lam}$", fontsize=9)
    fig.tight_layout()
    return fig


_RENDERERS = {
    "g2-vs-lambda": _render_g2_vs_lambda,
    "levels": _render_levels,
    "g2-surface": _render_g2_surface,
    "bias-heatmap": _render_bias_heatmap,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; raises before touching the output on bad input."""
    fig = _RENDERERS[spec.kind](spec)
    if spec.title:
        fig.suptitle(spec.title)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(spec.output, format="png",
                    metadata={"Software": None})
    finally:
        plt.close(fig)
    return spec.output
