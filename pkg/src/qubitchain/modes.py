"""Lumped-element normal modes and avoided-crossing coupling extraction.

Junctions are linearized to inductors; the chain then solves the
generalized eigenproblem omega^2 C phi = L^-1 phi over the qubit
coordinates. Sweeping one junction inductance through resonance hybridizes
a qubit pair, and half the minimal splitting of the two modes is the
exchange coupling |J|.

Spectator qubits can be removed two ways. "eliminate" (default) treats
their junctions as open: the spectator coordinates become inductor-free
and integrate out exactly like the pad-sum modes, leaving the pair block
of C_eff^-1 re-inverted, so the extracted J tracks the full-chain
couplings at every distance. "pin" shorts the spectator junctions
(phase fixed to zero), keeping the raw rows/columns of C_eff; that is the
literal zero-inductance circuit, but the shorted interior qubits no longer
interfere, so beyond-nearest splittings follow the effective-capacitance
drop-off instead of the full-chain one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .constants import NH
from .errors import BracketingError, NotPositiveDefiniteError, ValidationError
from .reduction import invert_spd

DEFAULT_JUNCTION_INDUCTANCE = 12.0 * NH
SWEEP_SPAN = (0.5, 2.0)
SWEEP_POINTS = 201
SPLITTING_XTOL = 1e-10

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LinearChainModel:
    """Capacitance matrix plus one junction inductance per site (None = pinned)."""

    c_eff: np.ndarray
    inductances: tuple

    def __post_init__(self):
        c = np.array(self.c_eff, dtype=float, copy=True)
        c.setflags(write=False)
        object.__setattr__(self, "c_eff", c)
        ls = tuple(None if l is None else float(l) for l in self.inductances)
        object.__setattr__(self, "inductances", ls)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValidationError(f"c_eff must be square, got shape {c.shape}")
        if len(ls) != c.shape[0]:
            raise ValidationError(
                f"{len(ls)} inductances for an N = {c.shape[0]} capacitance matrix")
        for l in ls:
            if l is not None and (not np.isfinite(l) or l <= 0):
                raise ValidationError(f"inductances must be positive or None, got {l!r}")

    @property
    def free_indices(self):
        return [i for i, l in enumerate(self.inductances) if l is not None]


def normal_modes(model: LinearChainModel) -> np.ndarray:
    """Mode frequencies (rad/s, ascending) of the unpinned coordinates."""
    keep = model.free_indices
    if not keep:
        raise ValidationError("at least one coordinate must stay unpinned")
    c = model.c_eff[np.ix_(keep, keep)]
    try:
        invert_spd(c)
    except NotPositiveDefiniteError as err:
        raise NotPositiveDefiniteError(
            "restricted capacitance matrix is not positive definite", pivot=err.pivot)
    l_inv = np.diag([1.0 / model.inductances[i] for i in keep])
    omega_sq = eigh(l_inv, c, eigvals_only=True)
    return np.sqrt(np.clip(omega_sq, 0.0, None))


def pin_spectators(c_eff: np.ndarray, pair,
                   inductance: float = DEFAULT_JUNCTION_INDUCTANCE) -> LinearChainModel:
    """Model with every site except the 1-based pair pinned (phase = 0).

    Pinning drops the spectator rows/columns of c_eff while their
    capacitive loading stays baked into the retained entries; the pair's
    junctions get ``inductance``.
    """
    i, j = _check_pair(c_eff, pair)
    ls = [None] * c_eff.shape[0]
    ls[i] = ls[j] = float(inductance)
    return LinearChainModel(c_eff=c_eff, inductances=tuple(ls))


def _check_pair(c_eff, pair):
    c_eff = np.asarray(c_eff)
    try:
        i, j = pair
    except (TypeError, ValueError):
        raise ValidationError(f"pair must be two site indices, got {pair!r}")
    n = c_eff.shape[0]
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValidationError(f"pair sites {pair!r} out of range for N = {n}")
    if i == j:
        raise ValidationError("pair sites must differ")
    return int(i) - 1, int(j) - 1


def _pair_capacitance(c_eff, i, j, spectators):
    if spectators == "pin":
        return c_eff[np.ix_([i, j], [i, j])]
    if spectators == "eliminate":
        inverse = invert_spd(np.asarray(c_eff, dtype=float))
        return invert_spd(inverse[np.ix_([i, j], [i, j])])
    raise ValidationError(f"spectators must be 'eliminate' or 'pin', got {spectators!r}")


@dataclass(frozen=True)
class AvoidedCrossing:
    """|J| (rad/s), the inductance at minimal splitting, and the sweep trace."""

    j_coupling: float
    l_cross: float
    trace_inductance: np.ndarray
    trace_lower: np.ndarray
    trace_upper: np.ndarray

    def __post_init__(self):
        for name in ("trace_inductance", "trace_lower", "trace_upper"):
            arr = np.array(getattr(self, name), dtype=float, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def avoided_crossing_J(c_eff: np.ndarray, pair, l_fixed: float,
                       l_sweep_range=None, n_points: int = SWEEP_POINTS,
                       spectators: str = "eliminate") -> AvoidedCrossing:
    """Extract |J| between a 1-based site pair from the minimal mode splitting.

    Site pair[0] keeps ``l_fixed``; pair[1] sweeps a geometric inductance
    grid (default [0.5, 2] x l_fixed), after which golden-section search
    refines the splitting minimum to 1e-10 relative in inductance. The
    range must bracket the resonance: the bare detuning has to change sign
    across it. The splitting magnitude carries no sign information, so the
    returned J is |J|.
    """
    if not np.isfinite(l_fixed) or l_fixed <= 0:
        raise ValidationError(f"l_fixed must be > 0, got {l_fixed!r}")
    if n_points < 3:
        raise ValidationError(f"n_points must be >= 3, got {n_points}")
    i, j = _check_pair(c_eff, pair)
    c_pair = _pair_capacitance(np.asarray(c_eff, dtype=float), i, j, spectators)

    if l_sweep_range is None:
        lo, hi = SWEEP_SPAN[0] * l_fixed, SWEEP_SPAN[1] * l_fixed
    else:
        lo, hi = (float(l_sweep_range[0]), float(l_sweep_range[1]))
    if not (0 < lo < hi):
        raise ValidationError(f"invalid sweep range ({lo!r}, {hi!r})")

    # bare (single-mode) frequencies from the diagonal entries decide bracketing
    omega_fixed = 1.0 / math.sqrt(l_fixed * c_pair[0, 0])
    def detuning(l):
        return 1.0 / math.sqrt(l * c_pair[1, 1]) - omega_fixed
    if detuning(lo) * detuning(hi) > 0:
        l_res = l_fixed * c_pair[0, 0] / c_pair[1, 1]
        raise BracketingError(
            f"sweep range [{lo!r}, {hi!r}] H does not bracket the resonance; "
            f"bare frequencies match near {l_res!r} H, try "
            f"({0.5 * l_res!r}, {2.0 * l_res!r})",
            context={"l_resonance": l_res})

    def splitting(l):
        omega_sq = eigh(np.diag([1.0 / l_fixed, 1.0 / l]), c_pair, eigvals_only=True)
        low, high = np.sqrt(omega_sq)
        return high - low, low, high

    grid = np.geomspace(lo, hi, n_points)
    lower = np.empty(n_points)
    upper = np.empty(n_points)
    gaps = np.empty(n_points)
    for k, l in enumerate(grid):
        gaps[k], lower[k], upper[k] = splitting(l)
    k_min = int(np.argmin(gaps))  # first minimum: ties break toward lower inductance
    a = grid[max(k_min - 1, 0)]
    b = grid[min(k_min + 1, n_points - 1)]

    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1 = splitting(x1)[0]
    f2 = splitting(x2)[0]
    while (b - a) > SPLITTING_XTOL * b:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = splitting(x1)[0]
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = splitting(x2)[0]
    l_cross = 0.5 * (a + b)
    gap_min = splitting(l_cross)[0]
    return AvoidedCrossing(
        j_coupling=0.5 * gap_min, l_cross=float(l_cross),
        trace_inductance=grid, trace_lower=lower, trace_upper=upper)
