"""Reduction of the +- block system onto the qubit ('-') subspace.

The '+' pad-sum modes carry no inductive energy, so their charges are
constants of motion and they can be eliminated. What remains is the Schur
complement C_eff = C-- - C-+ (C++)^-1 C+-, whose inverse carries every
charging energy and charge-charge coupling of the chain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.linalg import lapack

from .circuit import BlockCapacitanceMatrix
from .constants import E_CHARGE
from .errors import NotPositiveDefiniteError, NumericalError, SingularityError, ValidationError

# residual ceiling for ||m m^-1 - I||_max; exceeding it means the matrix is
# too ill-conditioned for the downstream 1e-6-grade comparisons
SPD_RESIDUAL_TOL = 1e-10
SPD_SYMMETRY_RTOL = 1e-10


def invert_spd(m: np.ndarray) -> np.ndarray:
    """Invert a symmetric positive-definite matrix via Cholesky (dpotrf/dpotri).

    Raises NotPositiveDefiniteError with the failing pivot index for non-SPD
    input, and NumericalError if the inverse fails the residual check.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    scale = max(float(np.abs(m).max()), 1e-300)
    if float(np.abs(m - m.T).max()) > SPD_SYMMETRY_RTOL * scale:
        raise ValidationError("matrix is not symmetric to 1e-10 relative")
    factor, info = lapack.dpotrf(m, lower=1)
    if info != 0:
        raise NotPositiveDefiniteError(
            f"Cholesky factorization failed at pivot {info}; matrix is not positive definite",
            pivot=int(info))
    inverse, info = lapack.dpotri(factor, lower=1)
    if info != 0:
        raise NumericalError(f"triangular inversion failed (dpotri info={info})")
    inverse = np.tril(inverse) + np.tril(inverse, -1).T
    residual = float(np.abs(m @ inverse - np.eye(m.shape[0])).max())
    if residual > SPD_RESIDUAL_TOL:
        raise NumericalError(
            f"inverse residual {residual:.3e} exceeds {SPD_RESIDUAL_TOL:.0e}; "
            "the matrix is too ill-conditioned", context={"residual": residual})
    return inverse


def effective_capacitance(blocks: BlockCapacitanceMatrix) -> np.ndarray:
    """Schur complement of the '+' block: C-- - C-+ (C++)^-1 C+-.

    Equals the re-inverted lower-right quadrant of the inverse of the full
    2N x 2N matrix. Requires an invertible C++, i.e. a nonzero ground
    capacitance for floating chains.
    """
    try:
        factor = cho_factor(blocks.cpp, lower=True)
    except np.linalg.LinAlgError as err:
        raise SingularityError(
            "the '+' block is singular, so the mediated coupling diverges "
            "(the infinite-range limit c_g/c_c -> 0); use a chain with c_g > 0 "
            "or regularize the ground capacitance explicitly") from err
    ceff = blocks.cmm - blocks.cpm.T @ cho_solve(factor, blocks.cpm)
    return 0.5 * (ceff + ceff.T)


def charging_energies(c_eff_inv: np.ndarray) -> np.ndarray:
    """Per-qubit charging energies E_C = e^2 (C_eff^-1)_ii / 2, in joules."""
    return E_CHARGE**2 * np.diag(np.asarray(c_eff_inv, dtype=float)) / 2.0


def charge_couplings(c_eff_inv: np.ndarray) -> np.ndarray:
    """Charge-charge couplings g_ij = (2e)^2 (C_eff^-1)_ij (i != j), in joules."""
    g = (2.0 * E_CHARGE) ** 2 * np.asarray(c_eff_inv, dtype=float).copy()
    np.fill_diagonal(g, 0.0)
    return 0.5 * (g + g.T)


@dataclass(frozen=True)
class EffectiveCoupling:
    """C_eff, its inverse, and the derived charging/coupling energies."""

    c_eff: np.ndarray
    c_eff_inv: np.ndarray
    e_c: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        for name in ("c_eff", "c_eff_inv", "e_c", "g"):
            arr = np.array(getattr(self, name), dtype=float, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.c_eff.shape[0]

    @classmethod
    def from_matrix(cls, c_eff: np.ndarray) -> "EffectiveCoupling":
        inverse = invert_spd(c_eff)
        return cls(c_eff=c_eff, c_eff_inv=inverse,
                   e_c=charging_energies(inverse), g=charge_couplings(inverse))

    @classmethod
    def from_blocks(cls, blocks: BlockCapacitanceMatrix) -> "EffectiveCoupling":
        return cls.from_matrix(effective_capacitance(blocks))
