"""End-to-end analysis pipeline and deterministic report serialization.

Reports quote frequencies in GHz, couplings in MHz, capacitances in fF and
inductances in nH; every numeric JSON field carries its unit in the key.
Floats are fixed to 12 significant digits so identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .circuit import (ChainSpec, NodeCapacitanceMatrix, Scheme, build_chain_blocks,
                      build_node_matrix, infer_uniform_spec, node_to_pm, CSV_SYMMETRY_RTOL)
from .closedform import (aa_forms, fixed_transmon_relation, infinite_chain_form,
                         qubit_cap_for_effective, single_ended_ratio, strong_coupling_form)
from .constants import CONSTANTS_SOURCE, E_CHARGE, FF, GHZ, H_PLANCK, MHZ, NH, TWO_PI
from .errors import FeasibilityError, NumericalError, ValidationError
from .reduction import SPD_RESIDUAL_TOL, EffectiveCoupling
from .spectrum import (DEFAULT_N_CUT, CouplingReport, SpectrumMethod, TransmonParams,
                       coupling_report, ej_from_inductance, transmon_spectrum)

DEFAULT_L_J = 12.0 * NH


def sig12(value: float) -> float:
    """Round to 12 significant digits (the report's float contract)."""
    return float(f"{float(value):.12g}")


def _jsonify(obj):
    if isinstance(obj, dict):
        return {key: _jsonify(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(item) for item in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return sig12(obj)
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    return obj


def render_json(payload: dict) -> str:
    return json.dumps(_jsonify(payload), indent=2) + "\n"


def center_site(n: int) -> int:
    """1-based site whose chi/xi the report quotes by default."""
    return (n + 1) // 2


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the analyze/import pipeline produces, in SI internally."""

    source: str
    spec: ChainSpec | None
    uniform: bool
    n_qubits: int
    method: SpectrumMethod
    n_cut: int
    l_j: float
    e_j: float
    ec: EffectiveCoupling
    spectra: tuple
    coupling: CouplingReport
    closed_form: dict | None

    def to_dict(self) -> dict:
        center = center_site(self.n_qubits)
        rep = self.coupling
        chi_center = rep.chi_at(center) if center in rep.chi_sites else None
        xi_center = rep.xi_at(center) if center in rep.xi_sites else None
        out = {
            "report": "chain-analysis",
            "source": self.source,
            "spec": self.spec.to_json_dict() if self.spec is not None else None,
            "uniform": self.uniform,
            "n_qubits": self.n_qubits,
            "method": self.method.value,
            "n_cut": self.n_cut,
            "l_j_nH": self.l_j / NH,
            "e_j_GHz": self.e_j / H_PLANCK / GHZ,
            "center_site": center,
            "qubits": [
                {
                    "site": site,
                    "omega01_GHz": spec.omega01 / TWO_PI / GHZ,
                    "e_c_GHz": self.ec.e_c[site - 1] / H_PLANCK / GHZ,
                    "anharmonicity_GHz": spec.anharmonicity / TWO_PI / GHZ,
                    "n_ge": spec.n_ge,
                }
                for site, spec in enumerate(self.spectra, start=1)
            ],
            "j_matrix_MHz": (rep.j / TWO_PI / MHZ).tolist(),
            "chi": {"sites": rep.chi_sites.tolist(), "values": rep.chi.tolist()},
            "xi": {"sites": rep.xi_sites.tolist(), "values": rep.xi.tolist()},
            "chi_center": chi_center,
            "xi_center": xi_center,
            "closed_form": self.closed_form,
            "provenance": {
                "package": f"qubitchain {__version__}",
                "constants": CONSTANTS_SOURCE,
                "spd_residual_tol": SPD_RESIDUAL_TOL,
                "csv_symmetry_rtol": CSV_SYMMETRY_RTOL,
            },
        }
        return out


def _signed_rel(numeric, analytic):
    if numeric is None or analytic is None or analytic == 0:
        return None
    return (numeric - analytic) / analytic


def _closed_form_block(spec: ChainSpec, ec: EffectiveCoupling, rep: CouplingReport):
    """Closed-form comparison for a uniform chain; deviations are signed
    relative errors of the finite-chain center values against the
    infinite-chain forms."""
    center = center_site(spec.n_qubits)
    chi_center = rep.chi_at(center) if center in rep.chi_sites else None
    xi_center = rep.xi_at(center) if center in rep.xi_sites else None
    e_c_center = float(ec.e_c[center - 1])

    if spec.scheme is Scheme.SINGLE_ENDED:
        ratio = single_ended_ratio(spec.c_sh, spec.c_c)
        chi_an, xi_an = fixed_transmon_relation(spec.c_sh, spec.c_c)
        return {
            "scheme": spec.scheme.value,
            "nnn_nn_ratio_exact": ratio.exact,
            "nnn_nn_ratio_approx": ratio.approximate,
            "chi": chi_an,
            "xi": xi_an,
            "deviations": {
                "chi_center": _signed_rel(chi_center, chi_an),
                "xi_center": _signed_rel(xi_center, xi_an),
            },
        }

    if spec.scheme is Scheme.AA:
        form = aa_forms(spec.c_q, spec.c_g, spec.c_c)
        e_c_an = E_CHARGE**2 / (2.0 * form.c_q_eff)
        return {
            "scheme": spec.scheme.value,
            "xi_c": form.xi_c,
            "c_q_eff_fF": form.c_q_eff / FF,
            "chi": form.chi,
            "xi": form.xi,
            "chi_max": form.chi_max,
            "deviations": {
                "chi_center": _signed_rel(chi_center, form.chi),
                "xi_center": _signed_rel(xi_center, form.xi),
                "e_c_center": _signed_rel(e_c_center, e_c_an),
            },
        }

    weak = infinite_chain_form(spec.c_q, spec.c_g, spec.c_c)
    strong = strong_coupling_form(spec.c_q, spec.c_g, spec.c_c)
    e_c_an = E_CHARGE**2 / (2.0 * strong.c_q_eff)
    return {
        "scheme": spec.scheme.value,
        "c_c_eff_fF": weak.c_c_eff / FF,
        "xi_c": weak.xi_c,
        "eta1": strong.eta1,
        "eta2": strong.eta2,
        "c_q_eff_fF": strong.c_q_eff / FF,
        "chi": strong.chi,
        "xi": strong.xi,
        "deviations": {
            "chi_center": _signed_rel(chi_center, strong.chi),
            "xi_center": _signed_rel(xi_center, strong.xi),
            "e_c_center": _signed_rel(e_c_center, e_c_an),
        },
    }


def _spectra_for(ec: EffectiveCoupling, e_j, method, n_cut):
    return tuple(
        transmon_spectrum(TransmonParams(e_j=e_j, e_c=float(e_c)), n_cut=n_cut, method=method)
        for e_c in ec.e_c)


def _assemble(source, spec, uniform, ec, l_j, method, n_cut) -> AnalysisReport:
    e_j = ej_from_inductance(l_j)
    spectra = _spectra_for(ec, e_j, method, n_cut)
    rep = coupling_report(ec, spectra)
    closed = _closed_form_block(spec, ec, rep) if spec is not None else None
    return AnalysisReport(
        source=source, spec=spec, uniform=uniform, n_qubits=ec.n, method=SpectrumMethod(method),
        n_cut=n_cut, l_j=float(l_j), e_j=e_j, ec=ec, spectra=spectra,
        coupling=rep, closed_form=closed)


def effective_coupling_for(spec: ChainSpec) -> EffectiveCoupling:
    """Reduce a chain spec to its EffectiveCoupling (single-ended chains are
    their own effective matrix)."""
    if spec.scheme is Scheme.SINGLE_ENDED:
        return EffectiveCoupling.from_matrix(build_node_matrix(spec).matrix)
    return EffectiveCoupling.from_blocks(build_chain_blocks(spec))


def analyze_chain(spec: ChainSpec, l_j: float = DEFAULT_L_J,
                  method=SpectrumMethod.HARMONIC, n_cut: int = DEFAULT_N_CUT) -> AnalysisReport:
    """Full pipeline for a uniform chain: build, reduce, invert, spectra, report."""
    ec = effective_coupling_for(spec)
    return _assemble("chain-spec", spec, True, ec, l_j, method, n_cut)


def analyze_node_matrix(node: NodeCapacitanceMatrix, l_j: float = DEFAULT_L_J,
                        method=SpectrumMethod.HARMONIC,
                        n_cut: int = DEFAULT_N_CUT) -> AnalysisReport:
    """Pipeline for an imported pad matrix; the reduction is basis-general,
    so non-uniform and long-range-stray matrices work too. Uniform matrices
    are recognized and get the closed-form comparison block."""
    ec = EffectiveCoupling.from_blocks(node_to_pm(node))
    spec = infer_uniform_spec(node)
    return _assemble("imported-csv", spec, spec is not None, ec, l_j, method, n_cut)


# ---------------------------------------------------------------------------
# parameter sweeps (chain-center chi/xi against the closed forms)

SWEEP_CSV_COLUMNS = ("c_g_ratio", "c_c_fF", "chi_center", "xi_center",
                     "chi_analytic", "xi_analytic")


@dataclass(frozen=True)
class SweepRow:
    c_g_ratio: float
    c_c: float
    chi_center: float
    xi_center: float
    chi_analytic: float
    xi_analytic: float
    error: str | None = None


def sweep_point(c_q_eff: float, c_g_ratio: float, c_c: float, n: int = 100) -> SweepRow:
    """One grid point: fix C_qeff, set C_g = ratio * C_qeff, solve for the
    physical C_q, then compare N-chain center numerics with the closed form."""
    nan = float("nan")
    try:
        c_g = c_g_ratio * c_q_eff
        c_q = qubit_cap_for_effective(c_q_eff, c_g, c_c)
        strong = strong_coupling_form(c_q, c_g, c_c)
        spec = ChainSpec(n_qubits=n, c_q=c_q, c_g=c_g, c_c=c_c, scheme=Scheme.AB)
        ec = effective_coupling_for(spec)
        rep = coupling_report(ec, _spectra_for(ec, ej_from_inductance(DEFAULT_L_J),
                                               SpectrumMethod.HARMONIC, DEFAULT_N_CUT))
        center = center_site(n)
        return SweepRow(
            c_g_ratio=c_g_ratio, c_c=c_c,
            chi_center=rep.chi_at(center), xi_center=rep.xi_at(center),
            chi_analytic=strong.chi, xi_analytic=strong.xi)
    except (ValidationError, FeasibilityError, NumericalError) as err:
        return SweepRow(c_g_ratio=c_g_ratio, c_c=c_c, chi_center=nan, xi_center=nan,
                        chi_analytic=nan, xi_analytic=nan, error=err.code)


def _sweep_worker(args):
    return sweep_point(*args)


def sweep_coupling_parameters(c_q_eff: float, c_g_ratios, c_c_values,
                              n: int = 100, jobs: int = 1):
    """Grid sweep, row order: outer loop over c_c values, inner over ratios.
    Rows for singular/unreachable points carry NaN and an error code rather
    than being dropped."""
    grid = [(c_q_eff, ratio, c_c, n) for c_c in c_c_values for ratio in c_g_ratios]
    if jobs <= 1:
        return [sweep_point(*point) for point in grid]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_worker, grid))


def sweep_rows_to_csv(rows, handle):
    """Delimited output; floats use their shortest round-trip representation."""
    handle.write(",".join(SWEEP_CSV_COLUMNS) + "\n")
    for row in rows:
        cells = [repr(float(value)) for value in
                 (row.c_g_ratio, row.c_c / FF, row.chi_center, row.xi_center,
                  row.chi_analytic, row.xi_analytic)]
        handle.write(",".join(cells) + "\n")
