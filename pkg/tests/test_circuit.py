"""Node-basis construction, the +- transform, and CSV import."""

import io

import numpy as np
import pytest

from qubitchain import (ChainSpec, Scheme, build_chain_blocks, build_node_matrix,
                        import_capacitance_csv, infer_uniform_spec, node_to_pm,
                        write_capacitance_csv)
from qubitchain.errors import CsvFormatError, StructureError, ValidationError
from qubitchain.constants import FF

from conftest import random_chain_spec


def pm_coordinates(v_node):
    """Independent oracle for the +- transform: per-qubit sum/difference."""
    v = np.asarray(v_node)
    n = v.size // 2
    return np.concatenate([v[0::2] + v[1::2], v[0::2] - v[1::2]])


class TestChainSpec:
    def test_json_round_trip(self, design1_spec):
        again = ChainSpec.from_json_dict(design1_spec.to_json_dict())
        assert again == design1_spec

    @pytest.mark.parametrize("bad", [
        dict(n_qubits=0, c_q=1e-15),
        dict(n_qubits=2, c_q=-1e-15),
        dict(n_qubits=2, c_q=0.0),                       # floating needs c_q > 0
        dict(n_qubits=2, c_q=1e-15, c_sh=1e-15),         # c_sh is single-ended only
        dict(n_qubits=2, scheme=Scheme.SINGLE_ENDED),    # needs c_sh > 0
        dict(n_qubits=2, scheme=Scheme.SINGLE_ENDED, c_sh=1e-15, c_q=1e-15),
    ])
    def test_invalid_specs_rejected(self, bad):
        with pytest.raises(ValidationError):
            ChainSpec(**bad)

    def test_unknown_config_key_rejected(self):
        with pytest.raises(ValidationError):
            ChainSpec.from_json_dict({"n": 2, "scheme": "AB", "c_q_fF": 50, "bogus": 1})


class TestBuildNodeMatrix:
    def test_single_qubit(self):
        spec = ChainSpec(n_qubits=1, c_q=50 * FF, c_g=10 * FF)
        node = build_node_matrix(spec)
        assert node.labels == ("q1a", "q1b")
        np.testing.assert_allclose(node.matrix / FF, [[60.0, -50.0], [-50.0, 60.0]],
                                   rtol=0, atol=1e-12)

    def test_interior_coupled_pad_diagonal(self, design1_spec):
        # an interior b pad carries c_q + c_g + c_c
        node = build_node_matrix(design1_spec)
        b3 = node.labels.index("q3b")
        assert node.matrix[b3, b3] / FF == pytest.approx(86.5, abs=1e-12)

    def test_single_ended_tridiagonal(self):
        spec = ChainSpec(n_qubits=3, scheme=Scheme.SINGLE_ENDED, c_sh=50 * FF, c_c=1 * FF)
        node = build_node_matrix(spec)
        np.testing.assert_allclose(
            node.matrix / FF,
            [[51.0, -1.0, 0.0], [-1.0, 52.0, -1.0], [0.0, -1.0, 51.0]],
            rtol=0, atol=1e-12)

    def test_aa_couplers_share_a_pad(self):
        spec = ChainSpec(n_qubits=3, c_q=40 * FF, c_g=10 * FF, c_c=5 * FF, scheme=Scheme.AA)
        node = build_node_matrix(spec)
        m = node.matrix / FF
        b1, b2 = node.labels.index("q1b"), node.labels.index("q2b")
        a2 = node.labels.index("q2a")
        assert m[b1, b2] == pytest.approx(-5.0)
        assert m[b1, a2] == pytest.approx(0.0)
        assert m[b2, b2] == pytest.approx(40 + 10 + 2 * 5)   # both couplers on pad b


class TestNodeToPm:
    def test_single_qubit_blocks(self):
        spec = ChainSpec(n_qubits=1, c_q=50 * FF, c_g=10 * FF)
        blocks = node_to_pm(build_node_matrix(spec))
        assert blocks.cpp[0, 0] == pytest.approx(5 * FF)
        assert blocks.cmm[0, 0] == pytest.approx(55 * FF)
        assert blocks.cpm[0, 0] == pytest.approx(0.0, abs=1e-30)

    def test_two_qubit_cross_block_is_antisymmetric_off_diagonal(self):
        spec = ChainSpec(n_qubits=2, c_q=50 * FF, c_g=10 * FF, c_c=8 * FF)
        blocks = node_to_pm(build_node_matrix(spec))
        assert blocks.cpm[1, 0] == pytest.approx(+spec.c_c / 4)
        assert blocks.cpm[0, 1] == pytest.approx(-spec.c_c / 4)

    def test_fourteen_node_reduction_interior_diagonal(self, design1_spec):
        # Maxwell-style 14x14 assembled from the published design values
        blocks = node_to_pm(build_node_matrix(design1_spec))
        interior = design1_spec.n_qubits // 2
        assert blocks.cpp[interior, interior] / FF == pytest.approx(22.1, abs=1e-9)

    def test_unpaired_labels_rejected(self):
        node = build_node_matrix(ChainSpec(n_qubits=3, scheme=Scheme.SINGLE_ENDED,
                                           c_sh=50 * FF, c_c=1 * FF))
        with pytest.raises(StructureError):
            node_to_pm(node)


class TestBlockConstruction:
    def test_interior_row_values(self, design1_spec):
        blocks = build_chain_blocks(design1_spec)
        cq, cg, cc = design1_spec.c_q, design1_spec.c_g, design1_spec.c_c
        assert blocks.cmm[3, 3] == pytest.approx(cq + cg / 2 + cc / 2)
        assert blocks.cmm[3, 4] == pytest.approx(+cc / 4)
        assert blocks.cpp[0, 0] == pytest.approx(cg / 2 + cc / 4)  # boundary row

    def test_no_coupler_means_diagonal_blocks(self):
        spec = ChainSpec(n_qubits=4, c_q=50 * FF, c_g=10 * FF, c_c=0.0)
        blocks = build_chain_blocks(spec)
        for m in (blocks.cpp, blocks.cmm):
            np.testing.assert_allclose(m, np.diag(np.diag(m)), atol=1e-30)
        np.testing.assert_allclose(blocks.cpm, 0.0, atol=1e-30)

    def test_single_ended_has_no_blocks(self):
        spec = ChainSpec(n_qubits=3, scheme=Scheme.SINGLE_ENDED, c_sh=50 * FF, c_c=1 * FF)
        with pytest.raises(ValidationError):
            build_chain_blocks(spec)

    @pytest.mark.parametrize("scheme", [Scheme.AB, Scheme.AA])
    def test_matches_node_transform(self, rng, scheme):
        for _ in range(200):
            spec = random_chain_spec(rng, scheme=scheme, n_min=1)
            direct = build_chain_blocks(spec)
            via_nodes = node_to_pm(build_node_matrix(spec))
            scale = max(abs(direct.full()).max(), 1e-300)
            for name in ("cpp", "cpm", "cmm"):
                np.testing.assert_allclose(
                    getattr(direct, name), getattr(via_nodes, name),
                    rtol=0, atol=1e-12 * scale, err_msg=f"{name} for {spec}")

    def test_kinetic_energy_invariant_under_transform(self, rng):
        for _ in range(200):
            spec = random_chain_spec(rng, scheme=Scheme.AB if rng.random() < 0.5 else Scheme.AA)
            node = build_node_matrix(spec)
            blocks = build_chain_blocks(spec)
            v = rng.standard_normal(2 * spec.n_qubits)
            energy_node = 0.5 * v @ node.matrix @ v
            v_pm = pm_coordinates(v)
            energy_pm = 0.5 * v_pm @ blocks.full() @ v_pm
            assert energy_pm == pytest.approx(energy_node, rel=1e-12)

    def test_assembled_block_matrix_is_psd(self, rng):
        for _ in range(200):
            spec = random_chain_spec(rng, scheme=Scheme.AB if rng.random() < 0.5 else Scheme.AA)
            eigenvalues = np.linalg.eigvalsh(build_chain_blocks(spec).full())
            assert eigenvalues.min() >= -1e-12 * max(eigenvalues.max(), 1e-300)

    def test_aa_and_ab_share_the_plus_block(self, design1_spec):
        ab = build_chain_blocks(design1_spec)
        aa = build_chain_blocks(ChainSpec(n_qubits=7, c_q=design1_spec.c_q,
                                          c_g=design1_spec.c_g, c_c=design1_spec.c_c,
                                          scheme=Scheme.AA))
        np.testing.assert_allclose(ab.cpp, aa.cpp, rtol=0, atol=1e-30)
        assert ab.cmm[0, 1] == pytest.approx(-aa.cmm[0, 1])


class TestCsvImport:
    def test_minimal_two_node_table(self):
        text = ",q1a,q1b\nq1a,1.0,0.0\nq1b,0.0,1.0\n"
        node = import_capacitance_csv(text.encode(), unit="fF")
        assert node.labels == ("q1a", "q1b")
        np.testing.assert_allclose(node.matrix / FF, np.eye(2), atol=1e-15)

    def test_unit_flag(self):
        text = ",q1a,q1b\nq1a,1e-15,0\nq1b,0,1e-15\n"
        node = import_capacitance_csv(io.StringIO(text), unit="F")
        assert node.matrix[0, 0] == pytest.approx(1e-15)

    def test_round_trip_reproduces_uniform_blocks(self, design1_spec, tmp_path):
        node = build_node_matrix(design1_spec)
        path = tmp_path / "design1.csv"
        write_capacitance_csv(node, path, unit="fF")
        again = import_capacitance_csv(path, unit="fF")
        assert again.labels == node.labels
        np.testing.assert_allclose(again.matrix, node.matrix, rtol=0, atol=0)
        direct = build_chain_blocks(design1_spec)
        via_csv = node_to_pm(again)
        np.testing.assert_allclose(via_csv.cmm, direct.cmm, rtol=1e-12)

    def test_asymmetry_rejected_with_context(self):
        text = ",q1a,q1b\nq1a,10.0,-2.0\nq1b,-2.002,10.0\n"
        with pytest.raises(CsvFormatError) as excinfo:
            import_capacitance_csv(text.encode())
        message = str(excinfo.value)
        assert "q1a" in message and "q1b" in message

    def test_small_asymmetry_averaged(self):
        text = ",q1a,q1b\nq1a,10.0,-2.0000000001\nq1b,-2.0,10.0\n"
        node = import_capacitance_csv(text.encode())
        assert node.matrix[0, 1] == node.matrix[1, 0]

    def test_non_square_rejected(self):
        with pytest.raises(CsvFormatError):
            import_capacitance_csv(b",q1a,q1b\nq1a,1,0\n")

    def test_negative_diagonal_rejected(self):
        text = ",q1a,q1b\nq1a,-1.0,0\nq1b,0,1.0\n"
        with pytest.raises(CsvFormatError):
            import_capacitance_csv(text.encode())

    def test_non_numeric_cell_names_position(self):
        text = ",q1a,q1b\nq1a,1.0,x\nq1b,0,1.0\n"
        with pytest.raises(CsvFormatError) as excinfo:
            import_capacitance_csv(text.encode())
        assert "q1b" in str(excinfo.value)


class TestInferUniformSpec:
    @pytest.mark.parametrize("scheme", [Scheme.AB, Scheme.AA])
    def test_recovers_uniform_chains(self, rng, scheme):
        for _ in range(25):
            spec = random_chain_spec(rng, scheme=scheme, n_min=2)
            inferred = infer_uniform_spec(build_node_matrix(spec))
            assert inferred is not None
            assert inferred.n_qubits == spec.n_qubits
            assert inferred.c_q == pytest.approx(spec.c_q, rel=1e-9)
            assert inferred.c_c == pytest.approx(spec.c_c, rel=1e-9)
            assert inferred.c_g == pytest.approx(spec.c_g, rel=1e-9)

    def test_stray_capacitance_breaks_uniformity(self, design1_spec):
        node = build_node_matrix(design1_spec)
        m = node.matrix.copy()
        b1 = node.labels.index("q1b")
        a3 = node.labels.index("q3a")
        stray = 0.1 * FF
        m[b1, b1] += stray
        m[a3, a3] += stray
        m[b1, a3] -= stray
        m[a3, b1] -= stray
        from qubitchain import NodeCapacitanceMatrix
        assert infer_uniform_spec(NodeCapacitanceMatrix(node.labels, m)) is None
