"""Render publication-style figures from simulation result CSVs.

Inputs are plain CSV files:

* sweep results, one row per run, with the columns in RUN_CSV_COLUMNS;
* trajectories, one row per step, with the columns in TRAJECTORY_CSV_COLUMNS.

All figures use one color convention: blue means synchronized (success
fraction or amplitude at or above SUCCESS_BOUNDARY), warm red/orange means
failure. Rendering is a pure view of the CSV — aggregation is limited to
grouping rows and averaging the recorded outcome columns.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

RUN_CSV_COLUMNS = (
    "seed", "n_agents", "cycle_len", "horizon", "theta", "f", "sigma",
    "topology", "k_or_r", "a_max", "success", "time_to_sync",
    "cluster_count_final",
)

TRAJECTORY_CSV_COLUMNS = ("step", "amplitude", "flashing_count")

SUCCESS_BOUNDARY = 0.85

# RdYlBu runs warm red (low) to blue (high), matching the convention that
# blue marks synchronization and warm colors mark failure.
SUCCESS_CMAP = "RdYlBu"

FIGURE_KINDS = ("heatmap-grid", "theta-f-panels", "amplitude-series")

_DPI = 150
_PNG_METADATA = {"Software": "fireflyfigs"}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input CSV, figure kind, axis bindings, output path.

    x_col / y_col / panel_col name columns of the run CSV and only apply to
    heatmap-grid figures; theta-f-panels and amplitude-series have fixed
    axis bindings implied by their kind.
    """

    input_csv: str
    kind: str
    output: str
    x_col: str = "n_agents"
    y_col: str = "cycle_len"
    panel_col: str = "sigma"
    value_col: str = "success"
    boundary: float = SUCCESS_BOUNDARY
    title: str = ""
    dpi: int = _DPI

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(
                f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}"
            )
        if not 0.0 < self.boundary <= 1.0:
            raise ValueError(f"boundary must be in (0,1], got {self.boundary}")


def load_table(path, required_columns):
    """Read a CSV and fail with the missing column names if any are absent."""
    df = pd.read_csv(path)
    missing = [c for c in required_columns if c not in df.columns]
    if missing:
        raise ValueError(
            f"{path}: missing required column(s) {', '.join(missing)}"
        )
    if df.empty:
        raise ValueError(f"{path}: no data rows")
    return df


def render(spec: FigureSpec) -> str:
    """Render the figure described by spec; returns the output path."""
    if spec.kind == "heatmap-grid":
        fig = _render_heatmap_grid(spec)
    elif spec.kind == "theta-f-panels":
        fig = _render_theta_f_panels(spec)
    else:
        fig = _render_amplitude_series(spec)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = _PNG_METADATA if out.suffix.lower() == ".png" else {"Date": None}
    fig.savefig(out, dpi=spec.dpi, metadata=metadata, bbox_inches="tight")
    plt.close(fig)
    return str(out)


def _aggregate_fraction(df, group_cols, value_col):
    """Mean of value_col per group; uses a precomputed success_fraction
    column instead when the CSV is already tidy aggregated output."""
    if "success_fraction" in df.columns:
        return df.groupby(group_cols, sort=True)["success_fraction"].mean()
    return df.groupby(group_cols, sort=True)[value_col].mean()


def _draw_cell_grid(ax, grid, x_vals, y_vals, boundary):
    """One heatmap panel: NaN cells hatched as 'no data'."""
    masked = np.ma.masked_invalid(grid)
    # Hatch the full panel first so masked (empty) cells show through hatched.
    ax.patch.set(hatch="///", edgecolor="0.6", facecolor="white")
    mesh = ax.pcolormesh(
        np.arange(len(x_vals) + 1), np.arange(len(y_vals) + 1), masked,
        cmap=SUCCESS_CMAP, vmin=0.0, vmax=1.0, edgecolors="0.85", linewidth=0.3,
    )
    ax.set_xticks(np.arange(len(x_vals)) + 0.5)
    ax.set_xticklabels([_fmt(v) for v in x_vals], rotation=90, fontsize=7)
    ax.set_yticks(np.arange(len(y_vals)) + 0.5)
    ax.set_yticklabels([_fmt(v) for v in y_vals], fontsize=7)
    return mesh


def _fmt(v):
    if isinstance(v, float) and v == int(v):
        return str(int(v))
    return str(v)


def _render_heatmap_grid(spec: FigureSpec):
    """One heatmap per panel_col value; cell color = mean outcome per (x, y)."""
    df = load_table(spec.input_csv,
                    (spec.x_col, spec.y_col, spec.panel_col, spec.value_col))
    fractions = _aggregate_fraction(
        df, [spec.panel_col, spec.y_col, spec.x_col], spec.value_col)
    panels = sorted(df[spec.panel_col].unique())
    x_vals = sorted(df[spec.x_col].unique())
    y_vals = sorted(df[spec.y_col].unique())

    n_panels = len(panels)
    ncols = min(n_panels, 3)
    nrows = math.ceil(n_panels / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.2 * ncols + 1.2, 2.8 * nrows),
        squeeze=False, sharex=True, sharey=True,
    )
    mesh = None
    for idx, panel in enumerate(panels):
        ax = axes[idx // ncols][idx % ncols]
        grid = np.full((len(y_vals), len(x_vals)), np.nan)
        for (yi, y) in enumerate(y_vals):
            for (xi, x) in enumerate(x_vals):
                key = (panel, y, x)
                if key in fractions.index:
                    grid[yi, xi] = fractions.loc[key]
        mesh = _draw_cell_grid(ax, grid, x_vals, y_vals, spec.boundary)
        ax.set_title(f"{spec.panel_col} = {_fmt(panel)}", fontsize=9)
        if idx // ncols == nrows - 1:
            ax.set_xlabel(spec.x_col, fontsize=8)
        if idx % ncols == 0:
            ax.set_ylabel(spec.y_col, fontsize=8)
    for idx in range(n_panels, nrows * ncols):
        axes[idx // ncols][idx % ncols].set_visible(False)

    cbar = fig.colorbar(mesh, ax=axes, shrink=0.85, pad=0.02)
    cbar.set_label("success fraction", fontsize=8)
    cbar.ax.axhline(spec.boundary, color="black", linewidth=1.2)
    cbar.ax.text(1.6, spec.boundary, f" {spec.boundary:g}", fontsize=7,
                 va="center", transform=cbar.ax.get_yaxis_transform())
    if spec.title:
        fig.suptitle(spec.title, fontsize=11, y=1.04)
    return fig


def _render_theta_f_panels(spec: FigureSpec):
    """Matrix of panels over (theta, f): mean peak amplitude vs connectivity.

    Columns sweep theta ascending, rows sweep f descending. Points at or
    above the boundary are blue; points below are warm red. Panels with no
    rows for their (theta, f) pair are hatched and labeled 'no data'.
    """
    df = load_table(spec.input_csv, ("theta", "f", "k_or_r", "a_max"))
    thetas = sorted(df["theta"].unique())
    fs = sorted(df["f"].unique(), reverse=True)
    means = df.groupby(["theta", "f", "k_or_r"], sort=True)["a_max"].mean()

    fig, axes = plt.subplots(
        len(fs), len(thetas),
        figsize=(1.9 * len(thetas) + 0.8, 1.6 * len(fs) + 0.8),
        squeeze=False, sharex=True, sharey=True,
    )
    cmap = plt.get_cmap(SUCCESS_CMAP)
    for ri, f in enumerate(fs):
        for ci, theta in enumerate(thetas):
            ax = axes[ri][ci]
            ax.set_ylim(-0.05, 1.05)
            try:
                series = means.loc[(theta, f)]
            except KeyError:
                ax.patch.set(hatch="///", edgecolor="0.6", facecolor="white")
                ax.text(0.5, 0.5, "no data", transform=ax.transAxes,
                        ha="center", va="center", fontsize=7, color="0.4")
                series = None
            if series is not None:
                ks = np.asarray(series.index, dtype=float)
                amps = np.asarray(series.values, dtype=float)
                ax.plot(ks, amps, color="0.6", linewidth=0.8, zorder=1)
                colors = [cmap(0.95) if a >= spec.boundary else cmap(0.05)
                          for a in amps]
                ax.scatter(ks, amps, c=colors, s=14, zorder=2,
                           edgecolors="0.3", linewidths=0.3)
                ax.axhline(spec.boundary, color="0.4", linestyle="--",
                           linewidth=0.7)
            if ri == 0:
                ax.set_title(f"theta = {_fmt(theta)}", fontsize=8)
            if ci == 0:
                ax.set_ylabel(f"f = {_fmt(f)}\npeak amplitude", fontsize=7)
            if ri == len(fs) - 1:
                ax.set_xlabel("connectivity", fontsize=7)
            ax.tick_params(labelsize=6)
    if spec.title:
        fig.suptitle(spec.title, fontsize=11)
    fig.tight_layout()
    return fig


def _render_amplitude_series(spec: FigureSpec):
    """Amplitude over time for a single run, with the success boundary marked."""
    df = load_table(spec.input_csv, TRAJECTORY_CSV_COLUMNS)
    fig, ax = plt.subplots(figsize=(6.0, 3.0))
    cmap = plt.get_cmap(SUCCESS_CMAP)
    reached = df["amplitude"].max() >= spec.boundary
    ax.plot(df["step"], df["amplitude"],
            color=cmap(0.95) if reached else cmap(0.05), linewidth=1.0)
    ax.axhline(spec.boundary, color="0.4", linestyle="--", linewidth=0.8)
    ax.text(df["step"].iloc[-1], spec.boundary, f" {spec.boundary:g}",
            fontsize=7, va="center")
    ax.set_xlabel("step")
    ax.set_ylabel("flashing fraction")
    ax.set_ylim(-0.02, 1.02)
    if spec.title:
        ax.set_title(spec.title, fontsize=10)
    fig.tight_layout()
    return fig
