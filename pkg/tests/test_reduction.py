"""Schur-complement reduction, SPD inversion, and the derived energies."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qubitchain import (BlockCapacitanceMatrix, ChainSpec, EffectiveCoupling, Scheme,
                        build_chain_blocks, charge_couplings, charging_energies,
                        effective_capacitance, infinite_chain_form, invert_spd)
from qubitchain.constants import FF, GHZ, H_PLANCK
from qubitchain.errors import NotPositiveDefiniteError, SingularityError, ValidationError

from conftest import random_chain_spec


def dense_inverse_block_oracle(blocks):
    """Independent route to C_eff: invert the full 2N matrix, take the
    lower-right quadrant of the inverse, and invert that back."""
    n = blocks.n
    full_inverse = np.linalg.inv(blocks.full())
    return np.linalg.inv(full_inverse[n:, n:])


class TestInvertSpd:
    def test_identity(self):
        np.testing.assert_allclose(invert_spd(np.eye(4)), np.eye(4), atol=1e-14)

    def test_diagonal_femtofarads(self):
        inverse = invert_spd(np.diag([2 * FF, 4 * FF]))
        np.testing.assert_allclose(inverse, np.diag([0.5 / FF, 0.25 / FF]), rtol=1e-14)

    def test_random_spd_residual(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 51))
            a = rng.standard_normal((n, n))
            m = a.T @ a + 1e-3 * n * np.eye(n)
            inverse = invert_spd(m)
            residual = np.abs(m @ inverse - np.eye(n)).max()
            assert residual <= 1e-10

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**31))
    def test_residual_property(self, n, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, n))
        m = a.T @ a + 1e-2 * n * np.eye(n)
        assert np.abs(m @ invert_spd(m) - np.eye(n)).max() <= 1e-10

    def test_non_spd_reports_pivot(self):
        m = np.diag([1.0, -1.0, 2.0])
        with pytest.raises(NotPositiveDefiniteError) as excinfo:
            invert_spd(m)
        assert excinfo.value.pivot == 2

    def test_asymmetric_rejected(self):
        m = np.array([[1.0, 0.1], [0.0, 1.0]])
        with pytest.raises(ValidationError):
            invert_spd(m)


class TestEffectiveCapacitance:
    def test_no_mediation_returns_minus_block(self):
        cmm = np.diag([3.0, 4.0]) * FF
        blocks = BlockCapacitanceMatrix(cpp=np.eye(2) * FF, cpm=np.zeros((2, 2)), cmm=cmm)
        np.testing.assert_allclose(effective_capacitance(blocks), cmm, atol=0)

    def test_two_qubit_chain_matches_dense_oracle(self):
        spec = ChainSpec(n_qubits=2, c_q=50 * FF, c_g=10 * FF, c_c=5 * FF)
        blocks = build_chain_blocks(spec)
        ceff = effective_capacitance(blocks)
        oracle = dense_inverse_block_oracle(blocks)
        np.testing.assert_allclose(ceff, oracle, rtol=1e-12)

    def test_center_of_long_chain_matches_closed_form(self, design1_spec):
        spec = ChainSpec(n_qubits=100, c_q=design1_spec.c_q, c_g=design1_spec.c_g,
                         c_c=design1_spec.c_c)
        ceff = effective_capacitance(build_chain_blocks(spec))
        form = infinite_chain_form(spec.c_q, spec.c_g, spec.c_c)
        center = 49
        for distance in range(4):
            predicted = form.ceff_entry(center, center + distance)
            assert ceff[center, center + distance] == pytest.approx(predicted, rel=1e-6)

    def test_singular_plus_block_raises(self):
        spec = ChainSpec(n_qubits=4, c_q=50 * FF, c_g=0.0, c_c=5 * FF)
        with pytest.raises(SingularityError):
            effective_capacitance(build_chain_blocks(spec))

    def test_schur_equals_inverse_block_randomized(self, rng):
        for _ in range(200):
            scheme = Scheme.AB if rng.random() < 0.5 else Scheme.AA
            blocks = build_chain_blocks(random_chain_spec(rng, scheme=scheme))
            ceff = effective_capacitance(blocks)
            oracle = dense_inverse_block_oracle(blocks)
            np.testing.assert_allclose(ceff, oracle, rtol=1e-10, atol=1e-10 * abs(oracle).max())

    def test_static_plus_energy_restriction(self, rng):
        # fixing the '+' charges at zero, the full inverse quadratic form
        # must agree with the reduced one on the '-' charges
        for _ in range(50):
            blocks = build_chain_blocks(random_chain_spec(rng))
            n = blocks.n
            full_inverse = np.linalg.inv(blocks.full())
            ceff_inv = invert_spd(effective_capacitance(blocks))
            q_minus = rng.standard_normal(n)
            q_full = np.concatenate([np.zeros(n), q_minus])
            assert 0.5 * q_full @ full_inverse @ q_full == pytest.approx(
                0.5 * q_minus @ ceff_inv @ q_minus, rel=1e-10)


class TestDerivedEnergies:
    def test_charging_energy_design_values(self):
        # E_C = e^2 / (2 C) for the two published effective capacitances
        for c_fF, expected_ghz in ((58.394, 0.33171), (71.648, 0.27035)):
            e_c = charging_energies(np.array([[1.0 / (c_fF * FF)]]))[0]
            assert e_c / H_PLANCK / GHZ == pytest.approx(expected_ghz, rel=2e-5)

    def test_doubling_capacitance_halves_charging_energy(self):
        one = charging_energies(np.array([[1.0 / (50 * FF)]]))[0]
        two = charging_energies(np.array([[1.0 / (100 * FF)]]))[0]
        assert one == pytest.approx(2 * two, rel=1e-14)

    def test_diagonal_inverse_gives_zero_couplings(self):
        g = charge_couplings(np.diag([1.0, 2.0]) / FF)
        np.testing.assert_allclose(g, 0.0, atol=0)

    def test_coupling_to_charging_ratio_identity(self, design1_spec):
        ec = EffectiveCoupling.from_blocks(build_chain_blocks(design1_spec))
        i, j = 3, 4
        ratio = ec.g[i, j] / (16 * ec.e_c[i])
        assert ratio == pytest.approx(
            ec.c_eff_inv[i, j] / (2 * ec.c_eff_inv[i, i]), rel=1e-12)

    def test_outputs_symmetric_and_signed(self, rng):
        for _ in range(50):
            ec = EffectiveCoupling.from_blocks(build_chain_blocks(random_chain_spec(rng)))
            np.testing.assert_allclose(ec.c_eff, ec.c_eff.T, rtol=1e-12)
            np.testing.assert_allclose(ec.c_eff_inv, ec.c_eff_inv.T, rtol=1e-12)
            np.testing.assert_allclose(ec.g, ec.g.T, rtol=1e-12)

    def test_ab_inverse_sign_and_monotone_decay(self, rng):
        # alternating-pad chains: negative inverse off-diagonals whose
        # magnitude decays with distance, checked on interior rows
        for _ in range(50):
            spec = random_chain_spec(rng, scheme=Scheme.AB, n_min=6, n_max=12)
            ec = EffectiveCoupling.from_blocks(build_chain_blocks(spec))
            n = spec.n_qubits
            if spec.c_c == 0:
                continue
            for i in range(2, n - 2):
                row = ec.c_eff_inv[i]
                off = np.delete(row, i)
                assert np.all(off < 0)
                magnitudes = [abs(row[j]) for j in range(i + 1, n)]
                assert all(a >= b * (1 - 1e-12) for a, b in zip(magnitudes, magnitudes[1:]))
