"""Figure renderers: surface heatmap, operating-point sweep, budget curves.

Each renderer consumes a loaded Table, draws onto a fresh figure and
returns the plotted data series so callers (and tests) can inspect exactly
what went on the canvas.  Rendering never mutates the input file.
"""

from __future__ import annotations

import math
from importlib import resources
from typing import Dict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, Table, load_table

__all__ = [
    "FIGURES",
    "REQUIRED_COLUMNS",
    "render",
    "style_path",
]

REQUIRED_COLUMNS = {
    "fig3": ["v_e", "v_d", "per_count"],
    "fig4": [
        "noise_param",
        "delta_star",
        "r_delta_star",
        "beta_star",
        "beta_asymptotic",
        "nq_over_log_inv_2eps",
    ],
    "fig5": [
        "n",
        "noise_param",
        "nq_star",
        "nq_asymptotic",
        "n_c",
        "n_b",
        "nq_noiseless",
    ],
}


def style_path() -> str:
    return str(resources.files("qfp_plots") / "figures.mplstyle")


def _render_fig3(table: Table) -> Dict[str, np.ndarray]:
    ve, vd, c = table["v_e"], table["v_d"], table["per_count"]
    ve_axis = np.unique(ve)
    vd_axis = np.unique(vd)
    if ve_axis.size * vd_axis.size != len(table):
        raise SchemaError("surface rows do not form a full grid")
    grid = np.full((vd_axis.size, ve_axis.size), np.nan)
    ii = np.searchsorted(vd_axis, vd)
    jj = np.searchsorted(ve_axis, ve)
    grid[ii, jj] = c

    fig, ax = plt.subplots()
    mesh = ax.pcolormesh(ve_axis, vd_axis, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="information per count (nats)")
    ax.set_xlabel("visibility, equal inputs")
    ax.set_ylabel("visibility, different inputs")
    ax.set_title("Discrimination information per photocount")
    return {"ve_axis": ve_axis, "vd_axis": vd_axis, "grid": grid}


def _render_fig4(table: Table) -> Dict[str, np.ndarray]:
    npar = table["noise_param"]
    order = np.argsort(npar)
    npar = npar[order]
    delta = table["delta_star"][order]
    rate = table["r_delta_star"][order]
    beta = table["beta_star"][order]
    beta_asym = table["beta_asymptotic"][order]
    factor = table["nq_over_log_inv_2eps"][order]

    fig, (ax_top, ax_bot) = plt.subplots(2, 1, sharex=True, figsize=(6.4, 6.4))
    ax_top.semilogx(npar, delta, label="optimal relative distance")
    ax_top.semilogx(npar, rate, label="code rate at optimum")
    ax_top.set_ylabel("distance / rate")
    ax_top.legend(loc="center left")

    ax_rt = ax_top.twinx()
    ax_rt.semilogx(npar, factor, color="tab:green", label="budget / noiseless budget")
    ax_rt.set_ylabel("photon-budget factor")
    ax_rt.legend(loc="center right")
    ax_rt.grid(False)

    ax_bot.loglog(npar, beta, label="optimal bandwidth ratio")
    ax_bot.loglog(npar, beta_asym, "--", label="large-noise asymptote")
    ax_bot.set_xlabel("noise parameter")
    ax_bot.set_ylabel("bandwidth ratio")
    ax_bot.legend(loc="upper left")
    return {
        "noise_param": npar,
        "delta_star": delta,
        "r_delta_star": rate,
        "beta_star": beta,
        "beta_asymptotic": beta_asym,
        "factor": factor,
    }


def _render_fig5(table: Table) -> Dict[str, np.ndarray]:
    n = table["n"]
    order = np.argsort(n)
    n = n[order]
    npar = table["noise_param"][order]
    nq = table["nq_star"][order]
    nq_asym = table["nq_asymptotic"][order]
    n_c = table["n_c"][order]
    n_b = table["n_b"][order]
    noiseless = float(table["nq_noiseless"][order][0])

    fig, ax = plt.subplots()
    ax.loglog(n, nq, label="optimized photon budget", color="tab:blue")
    ax.loglog(n, nq_asym, "--", label="sqrt-n asymptote", color="tab:blue")
    ax.loglog(n, n_c, label="classical protocol", color="tab:red")
    ax.loglog(n, n_b, label="classical lower bound", color="tab:orange")
    ax.axhline(noiseless, linestyle=":", color="gray", label="noiseless budget")
    crossover = _crossover_n(n, npar)
    if crossover is not None:
        ax.axvline(
            crossover, linestyle=":", color="black", label="unit noise parameter"
        )
    ax.set_xlabel("input length (bits)")
    ax.set_ylabel("photons")
    ax.legend(loc="upper left")
    return {
        "n": n,
        "nq_star": nq,
        "nq_asymptotic": nq_asym,
        "n_c": n_c,
        "n_b": n_b,
        "nq_noiseless": np.array([noiseless]),
        "crossover_n": np.array([math.nan if crossover is None else crossover]),
    }


def _crossover_n(n: np.ndarray, npar: np.ndarray):
    """Interpolated n at which the noise parameter crosses 1, if spanned."""
    if npar.min() >= 1.0 or npar.max() <= 1.0:
        return None
    return float(np.exp(np.interp(0.0, np.log(npar), np.log(n))))


FIGURES = {
    "fig3": _render_fig3,
    "fig4": _render_fig4,
    "fig5": _render_fig5,
}


def render(figure: str, input_path: str, output_path: str) -> Dict[str, np.ndarray]:
    """Render one figure from a CSV and write an image file.

    Output format follows the output extension (SVG recommended: vector and
    byte-reproducible).  Returns the plotted series.
    """
    if figure not in FIGURES:
        raise SchemaError(
            f"unknown figure '{figure}'; expected one of {sorted(FIGURES)}"
        )
    table = load_table(input_path, REQUIRED_COLUMNS[figure])
    with plt.style.context(style_path()):
        try:
            series = FIGURES[figure](table)
            # A fixed metadata block keeps repeated renders byte-identical.
            plt.savefig(output_path, metadata=_stable_metadata(output_path))
        finally:
            plt.close("all")
    return series


def _stable_metadata(output_path: str):
    if output_path.endswith(".svg"):
        return {"Date": None}
    if output_path.endswith(".png"):
        return {"Software": None}
    return None
