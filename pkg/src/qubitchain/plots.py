"""Matplotlib renderers for the CLI report paths.

Figures land next to the delimited/JSON output when --plot is given; the
data files stay the primary artifact.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .constants import FF, GHZ, MHZ, NH, TWO_PI
from .report import AnalysisReport, center_site


def plot_coupling_overview(report: AnalysisReport, path):
    """|J| heatmap plus the coupling decay from the center qubit."""
    j_mhz = np.abs(report.coupling.j) / TWO_PI / MHZ
    n = report.n_qubits
    center = center_site(n)

    fig, (ax_map, ax_decay) = plt.subplots(1, 2, figsize=(9.2, 3.8))
    shown = np.where(j_mhz > 0, j_mhz, np.nan)
    image = ax_map.imshow(shown, origin="upper", cmap="viridis",
                          extent=(0.5, n + 0.5, n + 0.5, 0.5))
    ax_map.set_xlabel("site $j$")
    ax_map.set_ylabel("site $i$")
    ax_map.set_title(r"$|J_{ij}|/2\pi$ (MHz)")
    fig.colorbar(image, ax=ax_map, fraction=0.046)

    if n > 1:
        distances = np.arange(1, n - center + 1)
        values = [j_mhz[center - 1, center - 1 + d] for d in distances]
        ax_decay.semilogy(distances, values, "o-", color="C0",
                          label=f"from site {center}")
        xi_ref = None
        if report.closed_form and "xi" in report.closed_form:
            xi_ref = report.closed_form["xi"]
        if xi_ref and values[0] > 0:
            ax_decay.semilogy(distances, values[0] * xi_ref ** (distances - 1.0),
                              "--", color="C3", label=rf"$\xi = {xi_ref:.3g}$")
        ax_decay.set_xlabel(r"distance $|i-j|$")
        ax_decay.set_ylabel(r"$|J|/2\pi$ (MHz)")
        ax_decay.set_title("coupling decay")
        ax_decay.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)


def plot_sweep(rows, path):
    """chi and xi against C_g/C_qeff, numeric points over analytic curves."""
    fig, (ax_xi, ax_chi) = plt.subplots(2, 1, figsize=(6.0, 6.4), sharex=True)
    c_c_values = sorted({row.c_c for row in rows})
    for k, c_c in enumerate(c_c_values):
        block = [row for row in rows if row.c_c == c_c and not math.isnan(row.chi_center)]
        if not block:
            continue
        ratios = [row.c_g_ratio for row in block]
        color = f"C{k % 10}"
        label = rf"$C_c = {c_c / FF:.3g}$ fF"
        ax_xi.plot(ratios, [row.xi_analytic for row in block], "-", color=color)
        ax_xi.plot(ratios, [row.xi_center for row in block], "o", ms=4, color=color,
                   label=label)
        ax_chi.plot(ratios, [row.chi_analytic for row in block], "-", color=color)
        ax_chi.plot(ratios, [row.chi_center for row in block], "o", ms=4, color=color,
                    label=label)
    ax_xi.set_xscale("log")
    ax_xi.set_yscale("log")
    ax_chi.set_xscale("log")
    ax_chi.set_yscale("log")
    ax_xi.set_ylabel(r"damping factor $\xi$")
    ax_chi.set_ylabel(r"coupling strength $\chi$")
    ax_chi.set_xlabel(r"$C_G / C_{q,\mathrm{eff}}$")
    ax_xi.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)


def plot_crossing_trace(crossing, path):
    """Both hybridized branches against the swept inductance."""
    fig, ax = plt.subplots(figsize=(5.4, 3.8))
    l_nh = crossing.trace_inductance / NH
    ax.plot(l_nh, crossing.trace_lower / TWO_PI / GHZ, "-", color="C0", label=r"$f_-$")
    ax.plot(l_nh, crossing.trace_upper / TWO_PI / GHZ, "-", color="C1", label=r"$f_+$")
    ax.axvline(crossing.l_cross / NH, color="0.6", lw=0.8, ls=":")
    ax.set_xlabel(r"swept inductance $L$ (nH)")
    ax.set_ylabel("mode frequency (GHz)")
    ax.set_title(rf"$|J|/2\pi = {crossing.j_coupling / TWO_PI / MHZ:.4g}$ MHz")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=200)
    plt.close(fig)
