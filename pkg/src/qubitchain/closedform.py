"""Analytic results for uniform chains and the inverse design problem.

The infinite alternating-pad (AB) chain admits closed forms at two levels:
the effective capacitance itself,

    (C_eff)_ij = C_q delta_ij + C_ceff * xi_C^|i-j|,
    C_ceff = sqrt((C_g/2)(C_c + C_g/2)),
    1/xi_C = (sqrt(C_g/2C_c) + sqrt(1 + C_g/2C_c))^2,

and, without any weak-coupling assumption, its inverse

    (C_eff^-1)_ij = (1/C_qeff) [delta_ij (1 + 2chi/xi) - (2chi/xi) xi^|i-j|],

with chi, xi, C_qeff built from

    eta1 = sqrt((C_g/2) / (C_g/2 + C_q)),
    eta2 = sqrt((C_g/2 + C_c) / (C_g/2 + C_c + C_q)),
    xi = (eta2 - eta1)/(eta2 + eta1),
    chi = eta1 eta2 / (2 (1 - eta1 eta2)) * xi,
    C_qeff = C_q / (1 - eta1 eta2).

The design map inverts the latter: any target (chi, xi, C_qeff) with
0 < xi < 1 and 0 < chi < (1 - xi)/4 is reachable by

    C_q = xi/(xi + 2 chi) C_qeff,
    C_c = 8 chi / (1 - (xi + 4 chi)^2) C_qeff,
    C_g = 4 (1 - xi) chi / ((xi + 2 chi)(1 + xi + 4 chi)) C_qeff.

Same-pad (AA) wiring flips the sign of the mediated term and is handled by
aa_forms; single-ended chains (one node per qubit) are pinned to
chi = xi/2 with drop-off roughly C_c/C_sh.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .circuit import ChainSpec, Scheme, build_node_matrix
from .errors import FeasibilityError, SingularityError, ValidationError
from .reduction import invert_spd


def _require_positive(**caps):
    for name, value in caps.items():
        if not np.isfinite(value) or value <= 0:
            raise ValidationError(f"{name} must be finite and > 0, got {value!r}")


def _require_nonnegative(**caps):
    for name, value in caps.items():
        if not np.isfinite(value) or value < 0:
            raise ValidationError(f"{name} must be finite and >= 0, got {value!r}")


def _geometric_dropoff(gap, c_c):
    """xi for the lattice kernel 1/(gap + c_c sin^2(k/2)); 0 when c_c = 0."""
    if c_c == 0:
        return 0.0
    r = gap / c_c
    return 1.0 / (math.sqrt(r) + math.sqrt(1.0 + r)) ** 2


@dataclass(frozen=True)
class InfiniteChainForm:
    """Mediated effective capacitance of the infinite AB chain."""

    c_c_eff: float
    xi_c: float
    c_q: float

    def ceff_entry(self, i: int, j: int) -> float:
        """Predicted (C_eff)_ij = C_q delta_ij + C_ceff xi_C^|i-j|."""
        return (self.c_q if i == j else 0.0) + self.c_c_eff * self.xi_c ** abs(i - j)


def infinite_chain_form(c_q, c_g, c_c) -> InfiniteChainForm:
    """Evaluate C_ceff and xi_C; valid for c_g > 0 (finite-range mediation)."""
    _require_nonnegative(c_q=c_q, c_c=c_c)
    if not np.isfinite(c_g) or c_g < 0:
        raise ValidationError(f"c_g must be finite and >= 0, got {c_g!r}")
    if c_g == 0:
        raise SingularityError(
            "c_g = 0 puts the chain at the infinite-range limit (xi_C -> 1); "
            "the geometric closed form does not apply")
    half_g = c_g / 2.0
    return InfiniteChainForm(
        c_c_eff=math.sqrt(half_g * (c_c + half_g)),
        xi_c=_geometric_dropoff(half_g, c_c),
        c_q=float(c_q))


@dataclass(frozen=True)
class StrongCouplingForm:
    """Exact inverse-capacitance parameters of the infinite AB chain."""

    eta1: float
    eta2: float
    c_q_eff: float
    chi: float
    xi: float

    @property
    def mediation_ratio(self) -> float:
        """chi/xi = eta1 eta2 / (2 (1 - eta1 eta2)); finite even at xi = 0."""
        return self.eta1 * self.eta2 / (2.0 * (1.0 - self.eta1 * self.eta2))

    def ceff_inv_entry(self, i: int, j: int) -> float:
        """Predicted (C_eff^-1)_ij, in 1/farads."""
        ratio = self.mediation_ratio
        if i == j:
            return 1.0 / self.c_q_eff
        return -(2.0 * ratio) * self.xi ** abs(i - j) / self.c_q_eff


def strong_coupling_form(c_q, c_g, c_c) -> StrongCouplingForm:
    """Evaluate eta1, eta2, C_qeff, chi, xi from the circuit capacitances."""
    _require_positive(c_q=c_q)
    _require_nonnegative(c_g=c_g, c_c=c_c)
    half_g = c_g / 2.0
    eta1 = math.sqrt(half_g / (half_g + c_q))
    eta2 = math.sqrt((half_g + c_c) / (half_g + c_c + c_q))
    xi = (eta2 - eta1) / (eta2 + eta1)
    chi = eta1 * eta2 / (2.0 * (1.0 - eta1 * eta2)) * xi
    return StrongCouplingForm(
        eta1=eta1, eta2=eta2, c_q_eff=c_q / (1.0 - eta1 * eta2), chi=chi, xi=xi)


def chi_upper_bound(xi: float) -> float:
    """Feasibility ceiling of the AB design map (C_c -> infinity frontier)."""
    return (1.0 - xi) / 4.0


def design_capacitances(chi, xi, c_q_eff):
    """Solve the inverse design problem: (chi, xi, C_qeff) -> (C_q, C_c, C_g).

    Feasible region: 0 <= xi < 1 and 0 <= chi < (1 - xi)/4, open at the
    chi ceiling where C_c diverges. chi = 0 returns the decoupled chain
    (C_c = C_g = 0) explicitly.
    """
    for name, value in (("chi", chi), ("xi", xi)):
        if not np.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value!r}")
    _require_positive(c_q_eff=c_q_eff)
    if not 0.0 <= xi < 1.0:
        raise FeasibilityError(
            f"xi must lie in [0, 1), got {xi!r}", context={"xi": xi})
    bound = chi_upper_bound(xi)
    if not 0.0 <= chi < bound:
        raise FeasibilityError(
            f"chi = {chi!r} is outside [0, (1 - xi)/4) = [0, {bound!r}); the coupling "
            "capacitance required would be infinite or negative",
            context={"chi": chi, "xi": xi, "chi_max": bound})
    if chi == 0.0:
        return c_q_eff, 0.0, 0.0
    c_q = xi / (xi + 2.0 * chi) * c_q_eff
    c_c = 8.0 * chi / (1.0 - (xi + 4.0 * chi) ** 2) * c_q_eff
    c_g = 4.0 * (1.0 - xi) * chi / ((xi + 2.0 * chi) * (1.0 + xi + 4.0 * chi)) * c_q_eff
    return c_q, c_c, c_g


@dataclass(frozen=True)
class AAChainForm:
    """Closed forms for the same-pad (AA) coupler wiring.

    The mediated capacitance keeps the AB drop-off xi_c but acquires a
    negative sign, so qubit-basis coupling terms come out positive. The
    inverse decays with its own xi, and the reachable chi is capped at
    xi (1 - xi)/4.
    """

    c_q_eff: float
    chi: float
    xi: float
    xi_c: float
    chi_max: float
    c_q: float
    c_g: float
    c_c: float

    def ceff_entry(self, i: int, j: int) -> float:
        """(C_eff)^AA_ij = (C_q + C_g) delta_ij - (C_g^2 / 4 C_ceff) xi_C^|i-j|."""
        half_g = self.c_g / 2.0
        c_c_eff = math.sqrt(half_g * (self.c_c + half_g))
        mediated = -(self.c_g**2 / (4.0 * c_c_eff)) * self.xi_c ** abs(i - j)
        return (self.c_q + self.c_g if i == j else 0.0) + mediated

    def ceff_inv_entry(self, i: int, j: int) -> float:
        """(C_eff^-1)^AA_ij = (1/C_qeff)[delta_ij (1 - 2chi/xi) + (2chi/xi) xi^|i-j|]."""
        ratio = self._ratio
        if i == j:
            return 1.0 / self.c_q_eff
        return (2.0 * ratio) * self.xi ** abs(i - j) / self.c_q_eff

    @property
    def _ratio(self) -> float:
        # chi/xi without dividing by xi, safe at c_c = 0
        half_g = self.c_g / 2.0
        gap = half_g * (self.c_q + half_g) / (self.c_q + 2.0 * half_g)
        c_gap_eff = math.sqrt(gap * (self.c_c + gap))
        off = half_g**2 / ((self.c_q + 2.0 * half_g) ** 2 * c_gap_eff)
        return off * self.c_q_eff / 2.0


def aa_forms(c_q, c_g, c_c) -> AAChainForm:
    """Closed forms for the AA wiring, derived the same way as the AB case.

    Eliminating the '+' modes in momentum space leaves the kernel
    (s + g)/((C_q + 2g) s + g (C_q + g)) with g = C_g/2 and
    s = C_c sin^2(k/2); partial fractions reduce its transform to the
    standard geometric kernel with gap D = g (C_q + g)/(C_q + 2g).
    """
    _require_positive(c_q=c_q, c_g=c_g)
    _require_nonnegative(c_c=c_c)
    half_g = c_g / 2.0
    gap = half_g * (c_q + half_g) / (c_q + 2.0 * half_g)
    xi = _geometric_dropoff(gap, c_c)
    c_gap_eff = math.sqrt(gap * (c_c + gap))
    off = half_g**2 / ((c_q + 2.0 * half_g) ** 2 * c_gap_eff)
    diag = 1.0 / (c_q + 2.0 * half_g) + off
    c_q_eff = 1.0 / diag
    chi = off * xi / (2.0 * diag)
    return AAChainForm(
        c_q_eff=c_q_eff, chi=chi, xi=xi,
        xi_c=_geometric_dropoff(half_g, c_c),
        chi_max=xi * (1.0 - xi) / 4.0,
        c_q=float(c_q), c_g=float(c_g), c_c=float(c_c))


def boundary_ceff(i: int, j: int, n: int, c_q, c_g, c_c) -> float:
    """Finite-chain (C_eff)_ij with the mirror-image boundary correction.

    (C_eff)_ij ~ C_q delta_ij + C_ceff (xi_C^|i-j| - xi_C^(n - |i+j-n-1|)),
    an integral approximation valid for large n; sites are 1-based. The
    correction decays from the chain edges with the same xi_C that sets the
    interaction range.
    """
    if not (isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer))):
        raise ValidationError("site indices must be integers")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValidationError(f"sites ({i}, {j}) out of range for n = {n}")
    if n < 10:
        raise ValidationError(
            f"the boundary closed form needs n >= 10 (got {n}); use the dense path")
    if n < 20:
        warnings.warn(
            f"boundary closed form is inaccurate for short chains (n = {n} < 20)",
            stacklevel=2)
    form = infinite_chain_form(c_q, c_g, c_c)
    mirror = form.xi_c ** (n - abs(i + j - n - 1))
    return (c_q if i == j else 0.0) + form.c_c_eff * (form.xi_c ** abs(i - j) - mirror)


class SingleEndedRatio(NamedTuple):
    exact: float
    approximate: float


def _single_ended_inverse(c_sh, c_c, n):
    spec = ChainSpec(n_qubits=n, scheme=Scheme.SINGLE_ENDED, c_sh=c_sh, c_c=c_c)
    return invert_spd(build_node_matrix(spec).matrix)


def single_ended_ratio(c_sh, c_c, n: int = 50) -> SingleEndedRatio:
    """n.n.n/n.n coupling ratio of a single-ended chain.

    The exact value comes from the dense tridiagonal inverse at the chain
    center; C_c/C_sh is the usual design estimate, reported alongside.
    """
    _require_positive(c_sh=c_sh)
    _require_nonnegative(c_c=c_c)
    if c_c == 0:
        return SingleEndedRatio(0.0, 0.0)
    inverse = _single_ended_inverse(c_sh, c_c, n)
    center = n // 2
    return SingleEndedRatio(
        exact=float(inverse[center, center + 2] / inverse[center, center + 1]),
        approximate=c_c / c_sh)


def fixed_transmon_relation(c_sh, c_c, n: int = 50):
    """(chi, xi) of a single-ended chain; the two are locked to chi = xi/2.

    The inverse of the tridiagonal capacitance matrix is a pure geometric
    kernel, so the coupling strength cannot be tuned independently of the
    drop-off. Verified against the dense inverse; deviations beyond 5% in
    the c_c/c_sh <= 0.1 regime indicate a numerical problem.
    """
    _require_positive(c_sh=c_sh)
    _require_nonnegative(c_c=c_c)
    if c_c == 0:
        return 0.0, 0.0
    inverse = _single_ended_inverse(c_sh, c_c, n)
    k = n // 2
    chi = math.sqrt(abs(inverse[k, k + 1] * inverse[k, k - 1])) / (2.0 * inverse[k, k])
    xi = math.sqrt(abs(
        inverse[k, k + 2] * inverse[k, k - 2] / (inverse[k, k + 1] * inverse[k, k - 1])))
    if c_c / c_sh <= 0.1 and abs(2.0 * chi / xi - 1.0) > 0.05:
        raise SingularityError(
            f"single-ended chi/xi = {chi / xi:.4f} strays from 1/2 in-regime; "
            "dense inversion looks unreliable here")
    return chi, xi


def qubit_cap_for_effective(c_q_eff, c_g, c_c):
    """Physical C_q that realizes a target effective qubit capacitance.

    C_qeff(C_q) is monotone with infimum 2 g h / (g + h) at C_q -> 0
    (g = C_g/2, h = g + C_c), so targets below that are unreachable for the
    given c_g, c_c.
    """
    _require_positive(c_q_eff=c_q_eff)
    _require_nonnegative(c_g=c_g, c_c=c_c)
    if c_g == 0:
        # eta1 = 0 makes the dressing exact: C_qeff = C_q
        return float(c_q_eff)
    half_g = c_g / 2.0
    h = half_g + c_c
    floor = 2.0 * half_g * h / (half_g + h)
    if c_q_eff <= floor:
        raise FeasibilityError(
            f"target c_q_eff = {c_q_eff!r} F is unreachable: the network alone "
            f"already provides {floor!r} F at c_q -> 0",
            context={"c_q_eff": c_q_eff, "minimum": floor})

    def mismatch(c_q):
        return strong_coupling_form(c_q, c_g, c_c).c_q_eff - c_q_eff

    return float(brentq(mismatch, 1e-9 * c_q_eff, c_q_eff, xtol=1e-30, rtol=1e-15))
