"""Capacitance-network construction for chains of two-pad floating qubits.

A floating qubit contributes two circuit nodes (pads ``a`` and ``b``); the
kinetic energy of the chain is T = 1/2 V^T C V over the pad voltages. The
sum/difference transformation Phi_+- = Phi_a +- Phi_b splits C into the
three blocks C++, C+-, C-- that the reduction module consumes. Single-ended
(one grounded pad) chains have one node per qubit and no +- structure.

All capacitances are in farads.
"""

from __future__ import annotations

import csv
import io
import os
import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import FF
from .errors import CsvFormatError, StructureError, ValidationError

# relative asymmetry above which an imported matrix is considered malformed
CSV_SYMMETRY_RTOL = 1e-6

_PAD_LABEL = re.compile(r"^q(\d+)([ab])$", re.IGNORECASE)


class Scheme(str, Enum):
    """How successive coupling capacitors attach to the qubit pads.

    AB: the coupler between qubits k and k+1 joins pad b of k to pad a of
    k+1, so each qubit couples left and right through different pads.
    AA: couplers join pad b to pad b, so both couplers of a given qubit
    attach to the same pad. SINGLE_ENDED: one pad grounded, one node per
    qubit, shunt capacitance c_sh.
    """

    AB = "AB"
    AA = "AA"
    SINGLE_ENDED = "SingleEnded"


@dataclass(frozen=True)
class ChainSpec:
    """Geometry and capacitances of a uniform qubit chain (farads)."""

    n_qubits: int
    c_q: float = 0.0
    c_g: float = 0.0
    c_c: float = 0.0
    scheme: Scheme = Scheme.AB
    c_sh: float = 0.0

    def __post_init__(self):
        if not isinstance(self.n_qubits, (int, np.integer)) or self.n_qubits < 1:
            raise ValidationError(
                f"n_qubits must be a positive integer, got {self.n_qubits!r}")
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        for name in ("c_q", "c_g", "c_c", "c_sh"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValidationError(f"{name} must be finite and >= 0, got {value!r}")
        if self.scheme is Scheme.SINGLE_ENDED:
            if self.c_sh <= 0:
                raise ValidationError("single-ended chains require c_sh > 0")
            if self.c_q != 0 or self.c_g != 0:
                raise ValidationError(
                    "c_q and c_g are unused for single-ended chains; leave them zero")
        else:
            if self.c_q <= 0:
                raise ValidationError(f"c_q must be > 0 for scheme {self.scheme.value}")
            if self.c_sh != 0:
                raise ValidationError("c_sh applies only to single-ended chains")

    @classmethod
    def from_json_dict(cls, data) -> "ChainSpec":
        """Build from the config schema {n, scheme, c_q_fF, c_g_fF, c_c_fF, c_sh_fF?}."""
        if not isinstance(data, dict):
            raise ValidationError(f"chain config must be a JSON object, got {type(data).__name__}")
        known = {"n", "scheme", "c_q_fF", "c_g_fF", "c_c_fF", "c_sh_fF"}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        if "n" not in data or "scheme" not in data:
            raise ValidationError("config requires 'n' and 'scheme'")
        try:
            scheme = Scheme(data["scheme"])
        except ValueError:
            raise ValidationError(
                f"scheme must be one of {[s.value for s in Scheme]}, got {data['scheme']!r}")
        def cap(key):
            value = data.get(key, 0.0)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValidationError(f"{key} must be a number, got {value!r}")
            return float(value) * FF
        return cls(n_qubits=int(data["n"]), c_q=cap("c_q_fF"), c_g=cap("c_g_fF"),
                   c_c=cap("c_c_fF"), scheme=scheme, c_sh=cap("c_sh_fF"))

    def to_json_dict(self) -> dict:
        out = {"n": self.n_qubits, "scheme": self.scheme.value,
               "c_q_fF": self.c_q / FF, "c_g_fF": self.c_g / FF, "c_c_fF": self.c_c / FF}
        if self.scheme is Scheme.SINGLE_ENDED:
            out["c_sh_fF"] = self.c_sh / FF
        return out


def pad_labels(n_qubits) -> tuple:
    """Canonical node labels q1a, q1b, ..., qNa, qNb."""
    return tuple(f"q{i}{pad}" for i in range(1, n_qubits + 1) for pad in "ab")


@dataclass(frozen=True)
class NodeCapacitanceMatrix:
    """Symmetric PSD matrix of capacitance coefficients over labelled nodes."""

    labels: tuple
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        m = np.array(self.matrix, dtype=float, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"node matrix must be square, got shape {m.shape}")
        if m.shape[0] != len(self.labels):
            raise ValidationError(
                f"{len(self.labels)} labels for a {m.shape[0]}x{m.shape[0]} matrix")
        scale = float(np.abs(m).max()) if m.size else 0.0
        if not np.allclose(m, m.T, rtol=0, atol=1e-9 * max(scale, 1e-300)):
            raise ValidationError("node matrix must be symmetric")
        m = 0.5 * (m + m.T)
        if np.any(np.diag(m) < 0):
            bad = int(np.argmin(np.diag(m)))
            raise ValidationError(
                f"negative diagonal entry at node {self.labels[bad]!r}")
        if m.size:
            lo = float(np.linalg.eigvalsh(m)[0])
            if lo < -1e-9 * max(scale, 1e-300):
                raise ValidationError(
                    f"node matrix is not positive semidefinite (lowest eigenvalue {lo:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_nodes(self):
        return len(self.labels)


@dataclass(frozen=True)
class BlockCapacitanceMatrix:
    """The C++, C+-, C-- blocks of the kinetic energy in the +- basis.

    The full 2N x 2N matrix is [[C++, C+-], [C-+, C--]] with C-+ = (C+-)^T.
    """

    cpp: np.ndarray
    cpm: np.ndarray
    cmm: np.ndarray

    def __post_init__(self):
        for name in ("cpp", "cpm", "cmm"):
            m = np.array(getattr(self, name), dtype=float, copy=True)
            m.setflags(write=False)
            object.__setattr__(self, name, m)
        n = self.cpp.shape[0]
        for name in ("cpp", "cpm", "cmm"):
            if getattr(self, name).shape != (n, n):
                raise ValidationError("all three blocks must be N x N")
        for name in ("cpp", "cmm"):
            m = getattr(self, name)
            if not np.allclose(m, m.T, rtol=0, atol=1e-9 * max(np.abs(m).max(), 1e-300)):
                raise ValidationError(f"{name} must be symmetric")

    @property
    def n(self):
        return self.cpp.shape[0]

    def full(self) -> np.ndarray:
        """Assemble the symmetric 2N x 2N matrix over (Phi+, Phi-)."""
        return np.block([[self.cpp, self.cpm], [self.cpm.T, self.cmm]])


def build_node_matrix(spec: ChainSpec) -> NodeCapacitanceMatrix:
    """Capacitance-coefficient matrix of the chain in the node (pad) basis.

    Every two-terminal capacitor c between nodes u, v adds +c to both
    diagonal entries and -c off-diagonal; capacitors to ground add to the
    diagonal only (the ground node is implicit).
    """
    n = spec.n_qubits
    if spec.scheme is Scheme.SINGLE_ENDED:
        m = np.zeros((n, n))
        for i in range(n):
            neighbors = (1 if i > 0 else 0) + (1 if i < n - 1 else 0)
            m[i, i] = spec.c_sh + neighbors * spec.c_c
        for i in range(n - 1):
            m[i, i + 1] = m[i + 1, i] = -spec.c_c
        return NodeCapacitanceMatrix(tuple(f"q{i}" for i in range(1, n + 1)), m)

    m = np.zeros((2 * n, 2 * n))
    for i in range(n):
        a, b = 2 * i, 2 * i + 1
        m[a, a] += spec.c_q + spec.c_g
        m[b, b] += spec.c_q + spec.c_g
        m[a, b] -= spec.c_q
        m[b, a] -= spec.c_q
    for i in range(n - 1):
        u = 2 * i + 1                                   # pad b of qubit i+1 (1-based)
        v = 2 * (i + 1) if spec.scheme is Scheme.AB else 2 * (i + 1) + 1
        m[u, u] += spec.c_c
        m[v, v] += spec.c_c
        m[u, v] -= spec.c_c
        m[v, u] -= spec.c_c
    return NodeCapacitanceMatrix(pad_labels(n), m)


def _paired_indices(labels):
    """Map q<i>a / q<i>b labels to (a_index, b_index) per qubit, 1..N contiguous."""
    if len(labels) % 2:
        raise StructureError(f"expected an even node count, got {len(labels)}")
    found = {}
    for pos, label in enumerate(labels):
        match = _PAD_LABEL.match(label)
        if not match:
            raise StructureError(
                f"node label {label!r} does not match q<i>a / q<i>b")
        qubit, pad = int(match.group(1)), match.group(2).lower()
        if (qubit, pad) in found:
            raise StructureError(f"duplicate node label {label!r}")
        found[(qubit, pad)] = pos
    n = len(labels) // 2
    pairs = []
    for qubit in range(1, n + 1):
        if (qubit, "a") not in found or (qubit, "b") not in found:
            raise StructureError(
                f"qubit {qubit} is missing one of its pads; labels must pair "
                f"q<i>a with q<i>b for i = 1..{n}")
        pairs.append((found[(qubit, "a")], found[(qubit, "b")]))
    return pairs


def node_to_pm(node: NodeCapacitanceMatrix) -> BlockCapacitanceMatrix:
    """Congruence transform of the node matrix to the +- basis.

    With Phi_a = (Phi+ + Phi-)/2 and Phi_b = (Phi+ - Phi-)/2 the kinetic
    energy keeps its quadratic form, so the +- matrix is T^T C T for the
    corresponding change-of-variables matrix T.
    """
    pairs = _paired_indices(node.labels)
    n = len(pairs)
    t = np.zeros((2 * n, 2 * n))
    for q, (a, b) in enumerate(pairs):
        t[a, q] = 0.5
        t[a, n + q] = 0.5
        t[b, q] = 0.5
        t[b, n + q] = -0.5
    c = t.T @ node.matrix @ t
    return BlockCapacitanceMatrix(cpp=c[:n, :n], cpm=c[:n, n:], cmm=c[n:, n:])


def build_chain_blocks(spec: ChainSpec) -> BlockCapacitanceMatrix:
    """Directly emit C++, C+-, C-- for a uniform chain, boundary rows included.

    Interior rows carry the full coupler weight c_c/2 on the diagonal; rows
    1 and N see only one coupler, hence the (2 - delta_{i,1} - delta_{i,N})
    corrections. Agrees entrywise with node_to_pm(build_node_matrix(spec)).
    """
    if spec.scheme is Scheme.SINGLE_ENDED:
        raise ValidationError("single-ended chains have no +- block structure")
    n, cg, cq, cc = spec.n_qubits, spec.c_g, spec.c_q, spec.c_c
    cpp = np.zeros((n, n))
    cmm = np.zeros((n, n))
    cpm = np.zeros((n, n))
    for i in range(n):
        touches = (0 if i == 0 else 1) + (0 if i == n - 1 else 1)  # couplers at this site
        cpp[i, i] = cg / 2 + cc / 4 * touches
        cmm[i, i] = cq + cg / 2 + cc / 4 * touches
        if spec.scheme is Scheme.AB:
            # the lone boundary coupler leaves an uncancelled +- cross term
            cpm[i, i] = cc / 4 * ((1 if i == n - 1 else 0) - (1 if i == 0 else 0))
        else:
            cpm[i, i] = -cc / 4 * touches
    for i in range(n - 1):
        cpp[i, i + 1] = cpp[i + 1, i] = -cc / 4
        if spec.scheme is Scheme.AB:
            cmm[i, i + 1] = cmm[i + 1, i] = +cc / 4
            cpm[i, i + 1] = -cc / 4
            cpm[i + 1, i] = +cc / 4
        else:
            cmm[i, i + 1] = cmm[i + 1, i] = -cc / 4
            cpm[i, i + 1] = cpm[i + 1, i] = +cc / 4
    return BlockCapacitanceMatrix(cpp=cpp, cpm=cpm, cmm=cmm)


def _read_rows(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as handle:
            return list(csv.reader(handle))
    if isinstance(source, bytes):
        return list(csv.reader(io.StringIO(source.decode("utf-8"))))
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return list(csv.reader(io.StringIO(data)))
    raise CsvFormatError(f"unsupported CSV source type {type(source).__name__}")


def import_capacitance_csv(source, unit="fF", relabel=None) -> NodeCapacitanceMatrix:
    """Read a square labelled capacitance table (field-solver export style).

    The first row and first column carry node labels; cell (i, j) is the
    capacitance coefficient C_ij in ``unit`` ('F' or 'fF'). Small solver
    asymmetry (relative max |A - A^T| below 1e-6) is averaged away; larger
    asymmetry indicates a malformed export and is rejected naming the worst
    entry pair. ``relabel`` optionally maps the file's labels to canonical
    q<i>a / q<i>b names.
    """
    if unit not in ("F", "fF"):
        raise CsvFormatError(f"unit must be 'F' or 'fF', got {unit!r}")
    rows = [row for row in _read_rows(source) if row and any(cell.strip() for cell in row)]
    if len(rows) < 2:
        raise CsvFormatError("capacitance table needs a header row and at least one data row")
    header = [cell.strip() for cell in rows[0][1:]]
    n = len(header)
    if len(rows) - 1 != n:
        raise CsvFormatError(
            f"table is not square: {n} columns but {len(rows) - 1} data rows")
    labels = []
    matrix = np.empty((n, n))
    for i, row in enumerate(rows[1:]):
        if len(row) != n + 1:
            raise CsvFormatError(
                f"row {i + 2} has {len(row)} cells, expected {n + 1}")
        labels.append(row[0].strip())
        for j, cell in enumerate(row[1:]):
            try:
                matrix[i, j] = float(cell)
            except ValueError:
                raise CsvFormatError(
                    f"non-numeric cell at row {row[0].strip()!r}, column {header[j]!r}: {cell!r}")
    if labels != header:
        raise CsvFormatError(
            f"row labels {labels} do not match column labels {header}")
    if relabel:
        labels = [relabel.get(label, label) for label in labels]

    scale = max(float(np.abs(matrix).max()), 1e-300)
    asym = np.abs(matrix - matrix.T)
    worst = float(asym.max()) / scale
    if worst > CSV_SYMMETRY_RTOL:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise CsvFormatError(
            f"table asymmetry {worst:.3e} exceeds {CSV_SYMMETRY_RTOL:.0e}; worst pair "
            f"({labels[i]!r}, {labels[j]!r}): {matrix[i, j]!r} vs {matrix[j, i]!r}",
            context={"row": labels[i], "column": labels[j]})
    matrix = 0.5 * (matrix + matrix.T)
    if np.any(np.diag(matrix) < 0):
        bad = int(np.argmin(np.diag(matrix)))
        raise CsvFormatError(f"negative diagonal at node {labels[bad]!r}")
    factor = FF if unit == "fF" else 1.0
    return NodeCapacitanceMatrix(tuple(labels), matrix * factor)


def write_capacitance_csv(node: NodeCapacitanceMatrix, target, unit="fF"):
    """Write the labelled table import_capacitance_csv reads (round-trip exact)."""
    if unit not in ("F", "fF"):
        raise CsvFormatError(f"unit must be 'F' or 'fF', got {unit!r}")
    factor = FF if unit == "fF" else 1.0
    own = isinstance(target, (str, os.PathLike))
    handle = open(target, "w", newline="") if own else target
    try:
        writer = csv.writer(handle)
        writer.writerow([""] + list(node.labels))
        for label, row in zip(node.labels, node.matrix):
            writer.writerow([label] + [repr(float(value / factor)) for value in row])
    finally:
        if own:
            handle.close()


def infer_uniform_spec(node: NodeCapacitanceMatrix, rtol=1e-8):
    """Recover a uniform ChainSpec from a paired node matrix, or None.

    Tries the AB and AA coupler wirings against the matrix; a match means
    the closed forms apply and the report can quote them. Non-uniform or
    long-range-stray matrices return None.
    """
    try:
        pairs = _paired_indices(node.labels)
    except StructureError:
        return None
    n = len(pairs)
    m = node.matrix
    scale = float(np.abs(m).max())
    c_q = -float(np.mean([m[a, b] for a, b in pairs]))
    c_g = float(np.mean(m.sum(axis=1)))
    if c_q <= 0 or c_g < -rtol * scale:
        return None
    c_g = max(c_g, 0.0)
    for scheme in (Scheme.AB, Scheme.AA):
        if n > 1:
            if scheme is Scheme.AB:
                couplers = [m[pairs[i][1], pairs[i + 1][0]] for i in range(n - 1)]
            else:
                couplers = [m[pairs[i][1], pairs[i + 1][1]] for i in range(n - 1)]
            c_c = -float(np.mean(couplers))
            if c_c < -rtol * scale:
                continue
            c_c = max(c_c, 0.0)
        else:
            c_c = 0.0
        try:
            candidate = ChainSpec(n_qubits=n, c_q=c_q, c_g=c_g, c_c=c_c, scheme=scheme)
        except ValidationError:
            continue
        template = build_node_matrix(candidate)
        # compare in the file's node order
        permutation = [template.labels.index(label) for label in node.labels]
        reference = template.matrix[np.ix_(permutation, permutation)]
        if np.allclose(m, reference, rtol=0, atol=rtol * scale):
            return candidate
    return None
