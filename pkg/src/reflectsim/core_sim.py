"""Dense statevector simulation substrate.

Registers, operator kinds, gate application, inner products, projections.

Conventions used by every module in this package:

* qubit 0 is the **most significant** index bit of a register;
* ancilla qubits occupy the most-significant block, the system the least;
* sequences list their members in application (time) order, so the matrix
  of ``SequenceOp([a, b])`` is ``M_b @ M_a``;
* all amplitudes are complex128. Unitarity is enforced at construction to
  max-norm 1e-10; permutation/identity equalities are checked at 1e-12.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

UNITARY_ATOL = 1e-10
EXACT_ATOL = 1e-12


# ---------------------------------------------------------------------------
# resource footprints


@dataclass(frozen=True)
class ResourceFootprint:
    """Declared cost of applying an operator once.

    ``queries_u`` counts controlled-U/U^dagger invocations, ``two_qubit_gates``
    the U-independent two-qubit gates. ``ancilla_qubits`` is peak extra
    workspace, not additive. ``modeled`` labels costs that come from an
    analytic model rather than from simulated gates.
    """

    queries_u: int = 0
    two_qubit_gates: int = 0
    one_qubit_gates: int = 0
    ancilla_qubits: int = 0
    modeled: frozenset = frozenset()

    def merge(self, other: "ResourceFootprint") -> "ResourceFootprint":
        """Sequential composition: counters add, ancilla peaks, labels join."""
        return ResourceFootprint(
            queries_u=self.queries_u + other.queries_u,
            two_qubit_gates=self.two_qubit_gates + other.two_qubit_gates,
            one_qubit_gates=self.one_qubit_gates + other.one_qubit_gates,
            ancilla_qubits=max(self.ancilla_qubits, other.ancilla_qubits),
            modeled=self.modeled | other.modeled,
        )

    __add__ = merge

    def times(self, k: int) -> "ResourceFootprint":
        if k < 0:
            raise ValueError("repetition count must be non-negative")
        return ResourceFootprint(
            queries_u=self.queries_u * k,
            two_qubit_gates=self.two_qubit_gates * k,
            one_qubit_gates=self.one_qubit_gates * k,
            ancilla_qubits=self.ancilla_qubits,
            modeled=self.modeled,
        )

    def as_dict(self) -> dict:
        return {
            "queries_u": self.queries_u,
            "two_qubit_gates": self.two_qubit_gates,
            "one_qubit_gates": self.one_qubit_gates,
            "ancilla_qubits": self.ancilla_qubits,
            "modeled": sorted(self.modeled),
        }


ZERO_COST = ResourceFootprint()


# ---------------------------------------------------------------------------
# states and registers


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over a fixed qubit register.

    Instances are immutable; the amplitude buffer is copied in and marked
    read-only. Norm is not forced to 1 here because projections legitimately
    return sub-normalized vectors; unitary application preserves norms.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"amplitude length {amps.shape} does not match 2**{self.num_qubits}"
            )
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    @classmethod
    def computational(cls, num_qubits: int, index: int = 0) -> "StateVector":
        if not 0 <= index < (1 << num_qubits):
            raise ValueError("basis index out of range")
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class RegisterLayout:
    """Ancilla/system split: ancilla are the most-significant index bits."""

    ancilla_qubits: int
    system_qubits: int

    def __post_init__(self):
        if self.ancilla_qubits < 0:
            raise ValueError("ancilla_qubits must be >= 0")
        if self.system_qubits < 1:
            raise ValueError("system_qubits must be >= 1")

    @property
    def total_qubits(self) -> int:
        return self.ancilla_qubits + self.system_qubits

    @property
    def system_dim(self) -> int:
        return 1 << self.system_qubits

    @property
    def ancilla_dim(self) -> int:
        return 1 << self.ancilla_qubits

    def index(self, ancilla_index: int, system_index: int) -> int:
        """Basis index of |ancilla_index>|system_index>."""
        if not 0 <= ancilla_index < self.ancilla_dim:
            raise ValueError("ancilla index out of range")
        if not 0 <= system_index < self.system_dim:
            raise ValueError("system index out of range")
        return (ancilla_index << self.system_qubits) | system_index

    def split(self, index: int) -> tuple[int, int]:
        return index >> self.system_qubits, index & (self.system_dim - 1)


def embed_system(system_amplitudes: np.ndarray, layout: RegisterLayout,
                 ancilla_index: int = 0) -> StateVector:
    """Lift a system vector to the full register with a fixed ancilla state."""
    sys_amps = np.asarray(system_amplitudes, dtype=np.complex128)
    if sys_amps.shape != (layout.system_dim,):
        raise ValueError("system amplitude length does not match layout")
    amps = np.zeros(1 << layout.total_qubits, dtype=np.complex128)
    base = layout.index(ancilla_index, 0)
    amps[base:base + layout.system_dim] = sys_amps
    return StateVector(layout.total_qubits, amps)


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    dim = 1 << num_qubits
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(num_qubits, v / np.linalg.norm(v))


# ---------------------------------------------------------------------------
# operator kinds


class CircuitOp:
    """An applicable unitary with a declared resource footprint."""

    num_qubits: int
    footprint: ResourceFootprint

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def _transform(self, block: np.ndarray) -> np.ndarray:
        """Apply to a (dim, batch) array of column vectors."""
        raise NotImplementedError


class DenseOp(CircuitOp):
    def __init__(self, matrix: np.ndarray, footprint: ResourceFootprint = ZERO_COST):
        mat = np.asarray(matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("matrix must be square")
        n = int(mat.shape[0]).bit_length() - 1
        if (1 << n) != mat.shape[0]:
            raise ValueError("matrix dimension must be a power of two")
        defect = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
        if defect > UNITARY_ATOL:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        self.matrix = mat
        self.num_qubits = n
        self.footprint = footprint

    def _transform(self, block):
        return self.matrix @ block


class DiagonalOp(CircuitOp):
    def __init__(self, diagonal: np.ndarray, footprint: ResourceFootprint = ZERO_COST):
        diag = np.asarray(diagonal, dtype=np.complex128)
        n = int(diag.shape[0]).bit_length() - 1
        if diag.ndim != 1 or (1 << n) != diag.shape[0]:
            raise ValueError("diagonal length must be a power of two")
        if np.abs(np.abs(diag) - 1.0).max() > UNITARY_ATOL:
            raise ValueError("diagonal entries must have unit modulus")
        self.diagonal = diag
        self.num_qubits = n
        self.footprint = footprint

    def _transform(self, block):
        return self.diagonal[:, None] * block


class PermutationOp(CircuitOp):
    """Basis permutation |j> -> |perm[j]>."""

    def __init__(self, perm: np.ndarray, footprint: ResourceFootprint = ZERO_COST):
        p = np.asarray(perm, dtype=np.int64)
        n = int(p.shape[0]).bit_length() - 1
        if p.ndim != 1 or (1 << n) != p.shape[0]:
            raise ValueError("permutation length must be a power of two")
        if not np.array_equal(np.sort(p), np.arange(p.shape[0])):
            raise ValueError("not a permutation")
        self.perm = p
        self.num_qubits = n
        self.footprint = footprint

    def _transform(self, block):
        out = np.empty_like(block)
        out[self.perm] = block
        return out


class ControlledOp(CircuitOp):
    """Apply ``sub`` on the low qubits when the leading control qubits match
    ``pattern`` (a basis index over the control register, big-endian)."""

    def __init__(self, sub: CircuitOp, num_controls: int, pattern: int,
                 footprint: ResourceFootprint | None = None):
        if num_controls < 1:
            raise ValueError("need at least one control qubit")
        if not 0 <= pattern < (1 << num_controls):
            raise ValueError("control pattern out of range")
        self.sub = sub
        self.num_controls = num_controls
        self.pattern = pattern
        self.num_qubits = num_controls + sub.num_qubits
        # Controlled-U counts like U in the query model; gate-model overrides
        # are supplied by the builders that know their decomposition cost.
        self.footprint = sub.footprint if footprint is None else footprint

    def _transform(self, block):
        batch = block.shape[1]
        out = block.copy().reshape(1 << self.num_controls, self.sub.dim, batch)
        out[self.pattern] = self.sub._transform(out[self.pattern])
        return out.reshape(self.dim, batch)


class SequenceOp(CircuitOp):
    """A sequence of (op, targets) steps on a fixed-width register.

    Steps are applied first-to-last; the footprint is the merge of the
    members' footprints.
    """

    def __init__(self, num_qubits: int, steps, footprint: ResourceFootprint | None = None):
        self.num_qubits = num_qubits
        norm_steps = []
        for op, targets in steps:
            tg = _check_targets(op, num_qubits, targets)
            norm_steps.append((op, tg))
        self.steps = tuple(norm_steps)
        if footprint is None:
            footprint = ZERO_COST
            for op, _ in self.steps:
                footprint = footprint.merge(op.footprint)
        self.footprint = footprint

    def _transform(self, block):
        # stay in tensor form between steps: one contiguity copy per member
        batch = block.shape[1]
        tensor = block.reshape((2,) * self.num_qubits + (batch,))
        for op, targets in self.steps:
            tensor = _embed_tensor(op, tensor, self.num_qubits, targets)
        return np.ascontiguousarray(tensor).reshape(self.dim, batch)


def _check_targets(op: CircuitOp, num_qubits: int, targets) -> tuple:
    if targets is None:
        targets = tuple(range(op.num_qubits))
    tg = tuple(int(t) for t in targets)
    if len(tg) != op.num_qubits:
        raise ValueError(
            f"operator acts on {op.num_qubits} qubits but {len(tg)} targets given"
        )
    if len(set(tg)) != len(tg):
        raise ValueError("duplicate target qubit")
    if any(t < 0 or t >= num_qubits for t in tg):
        raise ValueError("target qubit out of range")
    return tg


def _embed_transform(op: CircuitOp, block: np.ndarray, num_qubits: int,
                     targets: tuple) -> np.ndarray:
    """Apply op at the given qubit positions of a (2**num_qubits, batch) block."""
    k = op.num_qubits
    batch = block.shape[1]
    if k == num_qubits and targets == tuple(range(num_qubits)):
        return op._transform(block)
    tensor = block.reshape((2,) * num_qubits + (batch,))
    tensor = _embed_tensor(op, tensor, num_qubits, targets)
    return np.ascontiguousarray(tensor).reshape(1 << num_qubits, batch)


def _embed_tensor(op: CircuitOp, tensor: np.ndarray, num_qubits: int,
                  targets: tuple) -> np.ndarray:
    """Tensor-form embedding: input and output have shape (2,)*n + (batch,);
    the output may be a strided view."""
    k = op.num_qubits
    moved = np.moveaxis(tensor, targets, range(k))
    shape = moved.shape
    flat = np.ascontiguousarray(moved).reshape(1 << k, -1)
    out = op._transform(flat)
    return np.moveaxis(out.reshape(shape), range(k), targets)


# ---------------------------------------------------------------------------
# application and metrics


def apply(op: CircuitOp, state: StateVector, targets=None) -> StateVector:
    """Return op|state> with op embedded at the given target qubits.

    targets[i] is the register qubit carrying op's qubit i (op's most
    significant qubit first). Defaults to the whole register.
    """
    tg = _check_targets(op, state.num_qubits, targets)
    block = state.amplitudes.reshape(-1, 1)
    out = _embed_transform(op, block, state.num_qubits, tg)
    return StateVector(state.num_qubits, out[:, 0])


def apply_batch(op: CircuitOp, columns: np.ndarray, num_qubits: int,
                targets=None) -> np.ndarray:
    """Apply op to many column vectors at once; returns the new columns."""
    tg = _check_targets(op, num_qubits, targets)
    cols = np.asarray(columns, dtype=np.complex128)
    if cols.ndim != 2 or cols.shape[0] != (1 << num_qubits):
        raise ValueError("columns must be a (2**num_qubits, batch) array")
    return _embed_transform(op, cols, num_qubits, tg)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("dimension mismatch")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def distance(a: StateVector, b: StateVector) -> float:
    """Euclidean norm ||a - b||."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("dimension mismatch")
    return float(np.linalg.norm(a.amplitudes - b.amplitudes))


def project_ancilla_zero(state: StateVector, layout: RegisterLayout
                         ) -> tuple[StateVector, float]:
    """(P|state>, weight) for P = |0><0| on the ancilla block, identity on
    the system. The returned vector is deliberately not renormalized."""
    if layout.total_qubits != state.num_qubits:
        raise ValueError("layout does not match state")
    amps = np.zeros_like(state.amplitudes)
    d = layout.system_dim
    amps[:d] = state.amplitudes[:d]
    weight = float(np.sum(np.abs(amps[:d]) ** 2))
    return StateVector(state.num_qubits, amps), weight


def op_matrix(op: CircuitOp) -> np.ndarray:
    """Dense matrix of an operator (columns are images of basis states)."""
    return op._transform(np.eye(op.dim, dtype=np.complex128))


def densify(op: CircuitOp, max_qubits: int = 10) -> DenseOp:
    """Collapse a narrow operator to one dense matrix with the same
    footprint. Purely a simulation speedup: the matrix is the exact product
    of the member gates, so semantics (including any QFT truncation) are
    unchanged."""
    if op.num_qubits > max_qubits:
        raise ValueError("operator too wide to densify")
    return DenseOp(op_matrix(op), op.footprint)


def unitarity_defect(op: CircuitOp) -> float:
    """max-norm of Op^dagger.Op - I, computed densely."""
    mat = op_matrix(op)
    return float(np.abs(mat.conj().T @ mat - np.eye(op.dim)).max())


def adjoint(op: CircuitOp) -> CircuitOp:
    """Inverse operator; same declared footprint."""
    if isinstance(op, DenseOp):
        return DenseOp(op.matrix.conj().T, op.footprint)
    if isinstance(op, DiagonalOp):
        return DiagonalOp(op.diagonal.conj(), op.footprint)
    if isinstance(op, PermutationOp):
        inv = np.empty_like(op.perm)
        inv[op.perm] = np.arange(op.perm.shape[0])
        return PermutationOp(inv, op.footprint)
    if isinstance(op, ControlledOp):
        return ControlledOp(adjoint(op.sub), op.num_controls, op.pattern, op.footprint)
    if isinstance(op, SequenceOp):
        steps = [(adjoint(o), tg) for o, tg in reversed(op.steps)]
        return SequenceOp(op.num_qubits, steps, op.footprint)
    raise TypeError(f"cannot invert {type(op).__name__}")


def audit_footprint(op: CircuitOp) -> ResourceFootprint:
    """Recompute a footprint by walking the operator tree.

    Sequences re-sum their members; other kinds report their declared cost.
    Used to check that composite declarations never drift from their parts.
    """
    if isinstance(op, SequenceOp):
        total = ZERO_COST
        for sub, _ in op.steps:
            total = total.merge(audit_footprint(sub))
        return total
    return op.footprint


# ---------------------------------------------------------------------------
# elementary gates

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)

_ONE_Q = ResourceFootprint(one_qubit_gates=1)
_TWO_Q = ResourceFootprint(two_qubit_gates=1)


def hadamard() -> CircuitOp:
    return DenseOp(_H, _ONE_Q)


def pauli_x() -> CircuitOp:
    return PermutationOp(np.array([1, 0]), _ONE_Q)


def pauli_z() -> CircuitOp:
    return DiagonalOp(np.array([1.0, -1.0]), _ONE_Q)


def phase_gate(angle: float) -> CircuitOp:
    return DiagonalOp(np.array([1.0, np.exp(1j * angle)]), _ONE_Q)


def ry(theta: float) -> CircuitOp:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return DenseOp(np.array([[c, -s], [s, c]]), _ONE_Q)


def cnot() -> CircuitOp:
    return ControlledOp(pauli_x(), 1, pattern=1, footprint=_TWO_Q)


def cphase(angle: float) -> CircuitOp:
    """Symmetric controlled phase: e^{i angle} on |11>."""
    return DiagonalOp(np.array([1.0, 1.0, 1.0, np.exp(1j * angle)]), _TWO_Q)


def swap_gate() -> CircuitOp:
    return PermutationOp(np.array([0, 2, 1, 3]), _TWO_Q)
