"""Quick-look matplotlib renderings of the CLI's data files.

Every experiment command writes a PNG next to its CSV so runs can be eyeballed
without a separate plotting pipeline.  The figures favour legibility over
polish; the CSV remains the canonical output.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_LABEL_COLORS = {
    "invalid-state": "#ffffff",
    "undistillable": "#c8c8c8",
    "distillable-not-scd": "#6e6e6e",
    "scd": "#000000",
}


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _group_key(row: dict, keys: Sequence[str]) -> tuple:
    return tuple(row[k] for k in keys if k in row)


def plot_spectrum(rows: list[dict], path: Path, param: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    values = sorted({r[param] for r in rows})
    for v in values:
        sub = sorted((r for r in rows if r[param] == v), key=lambda r: r["g"])
        gs = [r["g"] for r in sub]
        nlev = len([k for k in sub[0] if k.startswith("lam")])
        for k in range(1, nlev + 1):
            ax.plot(gs, [r[f"lam{k}"] for r in sub], lw=1,
                    label=f"{param}={v:g}" if k == 1 else None)
    ax.set_xlabel("g = h/J")
    ax.set_ylabel("eigenvalue / J")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_p_curve(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    group_keys = [k for k in ("family", "sampler", "rank", "gamma", "delta") if k in rows[0]]
    seen = sorted({_group_key(r, group_keys) for r in rows})
    for key in seen:
        sub = sorted((r for r in rows if _group_key(r, group_keys) == key), key=lambda r: r["g"])
        label = ", ".join(f"{k}={v}" for k, v in zip(group_keys, key) if v not in (None, ""))
        ax.errorbar([r["g"] for r in sub], [r["p"] for r in sub],
                    yerr=[r["std_error"] for r in sub], ms=3, marker="o", lw=1, label=label)
    ax.set_xlabel("g = h/J")
    ax.set_ylabel("p")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7)
    _save(fig, path)


def plot_delta_p(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for gamma in sorted({r["gamma"] for r in rows}):
        sub = sorted((r for r in rows if r["gamma"] == gamma), key=lambda r: r["g"])
        ax.plot([r["g"] for r in sub], [r["delta_p"] for r in sub], marker="o", ms=3,
                lw=1, label=f"gamma={gamma:g}")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("g = h/J")
    ax.set_ylabel("p(transverse) - p(longitudinal)")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_hist(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    group_keys = [k for k in ("rank", "g") if k in rows[0]]
    for key in sorted({_group_key(r, group_keys) for r in rows}):
        sub = [r for r in rows if _group_key(r, group_keys) == key]
        centers = [(r["bin_lo"] + r["bin_hi"]) / 2 for r in sub]
        width = sub[0]["bin_hi"] - sub[0]["bin_lo"]
        dens = [r["density"] / width for r in sub]
        label = ", ".join(f"{k}={v}" for k, v in zip(group_keys, key))
        ax.step(centers, dens, where="mid", lw=1, label=label)
    ax.set_xlabel("E")
    ax.set_ylabel("P(E)")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_thermal(grid_rows: list[dict], boundary_rows: list[dict], path: Path) -> None:
    gs = np.array(sorted({r["g"] for r in grid_rows}))
    betas = np.array(sorted({r["beta"] for r in grid_rows}))
    conc = np.full((betas.size, gs.size), np.nan)
    gi = {v: i for i, v in enumerate(gs)}
    bi = {v: i for i, v in enumerate(betas)}
    for r in grid_rows:
        conc[bi[r["beta"]], gi[r["g"]]] = r["concurrence"]
    fig, ax = plt.subplots(figsize=(6, 4))
    mesh = ax.pcolormesh(gs, betas, conc, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="concurrence")
    bg = [r["g"] for r in boundary_rows if r["beta_star"] is not None]
    bb = [r["beta_star"] for r in boundary_rows if r["beta_star"] is not None]
    if bg:
        ax.plot(bg, bb, color="white", lw=2, label="WCEC boundary")
        ax.legend(fontsize=8)
    ax.set_xlabel("g = h/J")
    ax.set_ylabel("J beta")
    _save(fig, path)


def plot_bell_volume(rows: list[dict], path: Path, x_name: str, y_name: str) -> None:
    g_values = sorted({r["g"] for r in rows})
    fig, axes = plt.subplots(1, len(g_values), figsize=(4.5 * len(g_values), 4), squeeze=False)
    for ax, g in zip(axes[0], g_values):
        sub = [r for r in rows if r["g"] == g]
        xs = np.array(sorted({r["x"] for r in sub}))
        ys = np.array(sorted({r["y"] for r in sub}))
        codes = {lab: i for i, lab in enumerate(_LABEL_COLORS)}
        img = np.zeros((ys.size, xs.size))
        xi = {v: i for i, v in enumerate(xs)}
        yi = {v: i for i, v in enumerate(ys)}
        for r in sub:
            img[yi[r["y"]], xi[r["x"]]] = codes[r["label"]]
        cmap = matplotlib.colors.ListedColormap(list(_LABEL_COLORS.values()))
        ax.pcolormesh(xs, ys, img, cmap=cmap, vmin=-0.5, vmax=3.5, shading="nearest")
        ax.set_title(f"g = {g:g}", fontsize=9)
        ax.set_xlabel(x_name)
        ax.set_ylabel(y_name)
    handles = [plt.Rectangle((0, 0), 1, 1, fc=c, ec="k") for c in _LABEL_COLORS.values()]
    axes[0][-1].legend(handles, list(_LABEL_COLORS), fontsize=7, loc="upper right")
    _save(fig, path)


def plot_qutrit(rows: list[dict], path: Path) -> None:
    thetas = np.array(sorted({r["theta"] for r in rows}))
    gs = np.array(sorted({r["g"] for r in rows}))
    grid = np.full((gs.size, thetas.size), np.nan)
    ti = {v: i for i, v in enumerate(thetas)}
    gi = {v: i for i, v in enumerate(gs)}
    for r in rows:
        grid[gi[r["g"]], ti[r["theta"]]] = r["p"]
    fig, ax = plt.subplots(figsize=(6, 4))
    mesh = ax.pcolormesh(thetas, gs, grid, shading="nearest", cmap="magma", vmin=0, vmax=1)
    fig.colorbar(mesh, ax=ax, label="p")
    ax.set_xlabel("theta")
    ax.set_ylabel("g = h/J")
    _save(fig, path)


def plot_df(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.bar([r["rank"] for r in rows], [r["eta"] for r in rows],
           yerr=[3 * r["std_error"] for r in rows], color="#666666")
    ax.set_xlabel("rank")
    ax.set_ylabel("distillability factor")
    ax.set_xticks([r["rank"] for r in rows])
    ax.set_ylim(0, 1.05)
    _save(fig, path)


def plot_independence(rows: list[dict], eta: float, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    pop = [r for r in rows if r["count"] > 0]
    centers = [(r["bin_lo"] + r["bin_hi"]) / 2 for r in pop]
    ax.plot(centers, [r["fraction"] for r in pop], marker="o", ms=3, lw=1,
            label="P(dist | E)")
    strong = [r for r in pop if r["populated"]]
    ax.plot([(r["bin_lo"] + r["bin_hi"]) / 2 for r in strong],
            [r["fraction"] for r in strong], marker="o", ms=5, lw=0, color="C3",
            label="well-populated bins")
    ax.axhline(eta, color="k", lw=1, ls="--", label=f"global eta = {eta:.3f}")
    ax.set_xlabel("E")
    ax.set_ylabel("distillable fraction")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_prange(rows: list[dict], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    gs = [r["g"] for r in rows]
    ax.fill_between(gs, [r["eps1"] for r in rows], [r["eps2"] for r in rows],
                    alpha=0.4, label="reachable target energy")
    if "state_lo" in rows[0]:
        ax.plot(gs, [r["state_lo"] for r in rows], "k--", lw=1, label="spectral bounds")
        ax.plot(gs, [r["state_hi"] for r in rows], "k--", lw=1)
    ax.set_xlabel("g = h/J")
    ax.set_ylabel("E")
    ax.legend(fontsize=8)
    _save(fig, path)
