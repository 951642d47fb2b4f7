"""Single-transmon spectra and assembly of the chain's exchange couplings.

The transmon Hamiltonian 4 E_C n^2 - E_J cos(phi) is diagonalized in the
charge basis |n| <= n_cut, where cos(phi) hops between neighboring charge
states with amplitude -E_J/2. For linearized junctions the harmonic values
omega = sqrt(8 E_J E_C)/hbar and |<e|n|g>| = (E_J/32 E_C)^(1/4) apply
instead; that is the convention matching lumped-inductor simulations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .constants import HBAR, PHI0_BAR
from .errors import TruncationError, ValidationError
from .reduction import EffectiveCoupling

DEFAULT_N_CUT = 40
# ground/excited charge amplitude allowed at the truncation boundary
BOUNDARY_AMPLITUDE_TOL = 1e-8


class SpectrumMethod(str, Enum):
    CHARGE_BASIS = "charge-basis"
    ASYMPTOTIC = "asymptotic"
    HARMONIC = "harmonic"


def ej_from_inductance(l_j) -> float:
    """Josephson energy of a linearized junction: E_J = (Phi0/2pi)^2 / L_J."""
    if not np.isfinite(l_j) or l_j <= 0:
        raise ValidationError(f"junction inductance must be > 0, got {l_j!r}")
    return PHI0_BAR**2 / l_j


@dataclass(frozen=True)
class TransmonParams:
    """Junction and charging energies in joules; l_j records the source inductance."""

    e_j: float
    e_c: float
    l_j: float | None = None

    def __post_init__(self):
        for name in ("e_j", "e_c"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValidationError(f"{name} must be > 0, got {value!r}")

    @classmethod
    def from_inductance(cls, l_j, e_c) -> "TransmonParams":
        return cls(e_j=ej_from_inductance(l_j), e_c=e_c, l_j=float(l_j))

    @property
    def ratio(self) -> float:
        return self.e_j / self.e_c


@dataclass(frozen=True)
class QubitSpectrum:
    """omega01 and anharmonicity in rad/s; n_ge is the charge matrix element."""

    omega01: float
    anharmonicity: float
    n_ge: float
    method: SpectrumMethod


def transmon_spectrum(params: TransmonParams, n_cut: int = DEFAULT_N_CUT,
                      method: SpectrumMethod = SpectrumMethod.CHARGE_BASIS) -> QubitSpectrum:
    """Spectrum of a single transmon by the requested method.

    Charge basis: dense diagonalization on |-n_cut .. n_cut> at zero offset
    charge; fails if the low-lying eigenstates reach the truncation
    boundary. Asymptotic: omega01 = sqrt(8 E_J E_C)/hbar with the transmon
    anharmonicity -E_C/hbar. Harmonic: same omega01, zero anharmonicity
    (the linearized-junction oscillator).
    """
    method = SpectrumMethod(method)
    if params.ratio < 1:
        raise ValidationError(
            f"E_J/E_C = {params.ratio:.3g} < 1 is outside the transmon regime")
    omega_h = np.sqrt(8.0 * params.e_j * params.e_c) / HBAR
    n_ge_h = (params.e_j / (32.0 * params.e_c)) ** 0.25
    if method is SpectrumMethod.HARMONIC:
        return QubitSpectrum(omega_h, 0.0, n_ge_h, method)
    if method is SpectrumMethod.ASYMPTOTIC:
        return QubitSpectrum(omega_h, -params.e_c / HBAR, n_ge_h, method)

    if n_cut < 10:
        raise ValidationError(f"charge-basis diagonalization needs n_cut >= 10, got {n_cut}")
    charges = np.arange(-n_cut, n_cut + 1, dtype=float)
    energies, states = eigh_tridiagonal(
        4.0 * params.e_c * charges**2,
        np.full(2 * n_cut, -params.e_j / 2.0),
        select="i", select_range=(0, 2))
    boundary = float(np.abs(states[[0, -1], :]).max())
    if boundary > BOUNDARY_AMPLITUDE_TOL:
        raise TruncationError(
            f"charge amplitude {boundary:.2e} at the n_cut = {n_cut} boundary exceeds "
            f"{BOUNDARY_AMPLITUDE_TOL:.0e}; increase n_cut",
            context={"n_cut": n_cut, "boundary_amplitude": boundary})
    omega01 = (energies[1] - energies[0]) / HBAR
    anharmonicity = (energies[2] - 2.0 * energies[1] + energies[0]) / HBAR
    n_ge = float(abs(states[:, 0] @ (charges * states[:, 1])))
    return QubitSpectrum(float(omega01), float(anharmonicity), n_ge, method)


@dataclass(frozen=True)
class CouplingReport:
    """Exchange couplings and the dimensionless chain parameters.

    chi is defined on interior sites 2..N-1, xi on 3..N-2 (1-based); the
    site arrays record the mapping. J is in rad/s with zero diagonal.
    """

    j: np.ndarray
    omega: np.ndarray
    chi: np.ndarray
    chi_sites: np.ndarray
    xi: np.ndarray
    xi_sites: np.ndarray

    def __post_init__(self):
        for name in ("j", "omega", "chi", "xi"):
            arr = np.array(getattr(self, name), dtype=float, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("chi_sites", "xi_sites"):
            arr = np.array(getattr(self, name), dtype=int, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.omega.size

    @property
    def j_over_omega(self) -> np.ndarray:
        """J_ij normalized by the geometric mean of the qubit frequencies."""
        return self.j / np.sqrt(np.outer(self.omega, self.omega))

    def chi_at(self, site: int) -> float:
        return float(self.chi[list(self.chi_sites).index(site)])

    def xi_at(self, site: int) -> float:
        return float(self.xi[list(self.xi_sites).index(site)])


def coupling_report(ec: EffectiveCoupling, spectra) -> CouplingReport:
    """Combine charge couplings with qubit spectra into J_ij, chi_i, xi_i.

    J_ij = g_ij <e|n|g>_i <e|n|g>_j / hbar; chi and xi are pure
    inverse-capacitance ratios,

        chi_i = sqrt|Cinv_{i,i+1} Cinv_{i,i-1}| / (2 Cinv_ii),
        xi_i = sqrt|Cinv_{i,i+2} Cinv_{i,i-2} / (Cinv_{i,i+1} Cinv_{i,i-1})|.
    """
    spectra = list(spectra)
    n = ec.n
    if len(spectra) != n:
        raise ValidationError(f"{len(spectra)} spectra for an N = {n} chain")
    n_ge = np.array([s.n_ge for s in spectra])
    omega = np.array([s.omega01 for s in spectra])
    j = ec.g * np.outer(n_ge, n_ge) / HBAR

    cinv = ec.c_eff_inv
    chi_sites = np.arange(2, n, dtype=int)            # 1-based sites 2..N-1
    chi = np.empty(chi_sites.size)
    for k, site in enumerate(chi_sites):
        i = site - 1
        chi[k] = np.sqrt(abs(cinv[i, i + 1] * cinv[i, i - 1])) / (2.0 * cinv[i, i])
    xi_sites = np.arange(3, n - 1, dtype=int)         # 1-based sites 3..N-2
    xi = np.empty(xi_sites.size)
    for k, site in enumerate(xi_sites):
        i = site - 1
        xi[k] = np.sqrt(abs(
            cinv[i, i + 2] * cinv[i, i - 2] / (cinv[i, i + 1] * cinv[i, i - 1])))
    return CouplingReport(j=j, omega=omega, chi=chi, chi_sites=chi_sites,
                          xi=xi, xi_sites=xi_sites)
