"""State preparation: rotation tree, centering, (centered) QFT, operator B.

B prepares the 2L+3 coefficient superposition for the LCU route: a
two-qubit header carrying the amplification padding terms, then the
Gaussian body B-hat applied to the data register conditional on the header
being |00>.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .core_sim import (
    CircuitOp,
    ControlledOp,
    DenseOp,
    ResourceFootprint,
    SequenceOp,
    StateVector,
    adjoint,
    apply,
    cnot,
    cphase,
    hadamard,
    pauli_x,
    pauli_z,
    swap_gate,
)
from .gaussian_kernel import KernelParams, phi_amplitudes

OAA_ANGLE = math.pi / 10

_AMP_ATOL = 1e-10


# ---------------------------------------------------------------------------
# rotation-tree amplitude encoding


@dataclass(frozen=True)
class RotationTree:
    """Binary tree of Ry angles preparing a real non-negative amplitude
    vector of length 2**depth from |0...0>. Angles are precomputed
    classically; zero-mass subtrees get angle 0 so tail underflow stays
    deterministic."""

    depth: int
    angles: np.ndarray

    def __post_init__(self):
        ang = np.asarray(self.angles, dtype=float)
        if ang.shape != ((1 << self.depth) - 1,):
            raise ValueError("angle count must be 2**depth - 1")
        if ang.size and (ang.min() < 0 or ang.max() > math.pi + 1e-12):
            raise ValueError("angles must lie in [0, pi]")
        object.__setattr__(self, "angles", ang)

    @classmethod
    def from_amplitudes(cls, amplitudes: np.ndarray) -> "RotationTree":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        k = int(amps.shape[0]).bit_length() - 1
        if amps.ndim != 1 or (1 << k) != amps.shape[0] or k < 1:
            raise ValueError("amplitude length must be a power of two >= 2")
        if abs(np.linalg.norm(amps) - 1.0) > _AMP_ATOL:
            raise ValueError("amplitudes must be normalized")
        if np.abs(amps.imag).max() > _AMP_ATOL or amps.real.min() < -_AMP_ATOL:
            raise ValueError("rotation tree requires non-negative real amplitudes")
        probs = np.clip(amps.real, 0, None) ** 2
        angles = np.empty((1 << k) - 1)
        pos = 0
        level = probs
        masses = [probs]
        while level.shape[0] > 1:
            level = level.reshape(-1, 2).sum(axis=1)
            masses.append(level)
        # angles laid out level by level from the root
        for depth_idx in range(k):
            node_masses = masses[k - depth_idx]
            child = masses[k - depth_idx - 1].reshape(-1, 2)
            theta = 2 * np.arctan2(np.sqrt(child[:, 1]), np.sqrt(child[:, 0]))
            theta[node_masses == 0] = 0.0
            angles[pos:pos + theta.shape[0]] = theta
            pos += theta.shape[0]
        return cls(depth=k, angles=angles)

    def to_op(self) -> CircuitOp:
        """Uniformly-controlled Ry cascade. The footprint charges the
        standard decomposition: 2**d CNOTs and 2**d rotations per level."""
        k = self.depth
        steps = []
        pos = 0
        for depth_idx in range(k):
            count = 1 << depth_idx
            mats = np.zeros((count, 2, 2))
            for i in range(count):
                t = self.angles[pos + i]
                c, s = math.cos(t / 2), math.sin(t / 2)
                mats[i] = [[c, -s], [s, c]]
            pos += count
            if depth_idx == 0:
                steps.append((
                    DenseOp(mats[0], ResourceFootprint(one_qubit_gates=1)),
                    (0,),
                ))
            else:
                cost = ResourceFootprint(two_qubit_gates=count,
                                         one_qubit_gates=count)
                block = _uniformly_controlled(mats, cost)
                steps.append((block, tuple(range(depth_idx + 1))))
        return SequenceOp(k, steps)


def _uniformly_controlled(mats: np.ndarray, footprint: ResourceFootprint) -> CircuitOp:
    """Block-diagonal op applying mats[pattern] to the last qubit."""
    count = mats.shape[0]
    dim = 2 * count
    full = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(count):
        full[2 * i:2 * i + 2, 2 * i:2 * i + 2] = mats[i]
    return DenseOp(full, footprint)


def rotation_tree_prep(amplitudes: np.ndarray) -> CircuitOp:
    """Circuit sending |0...0> to the given amplitude vector."""
    return RotationTree.from_amplitudes(amplitudes).to_op()


# ---------------------------------------------------------------------------
# centering


def centering_circuit(k: int, m: int) -> CircuitOp:
    """Embed a 2**k-state block into the middle of an m-qubit register.

    (m - k) stages of {CNOT(top data qubit -> appended qubit), X(old top)};
    on the embedded range this is the index shift j -> j + 2**(m-1) - 2**(k-1).
    """
    if not 1 <= k < m:
        raise ValueError("need 1 <= k < m")
    steps = []
    for width in range(k, m):
        top = m - width          # current top data qubit; qubit top-1 is appended
        steps.append((cnot(), (top, top - 1)))
        steps.append((pauli_x(), (top,)))
    return SequenceOp(m, steps)


def centering_offset(k: int, m: int) -> int:
    return (1 << (m - 1)) - (1 << (k - 1))


# ---------------------------------------------------------------------------
# QFT variants


@dataclass(frozen=True)
class QftSpec:
    """m-qubit QFT, exact or with controlled phases below 2 pi / 2**cutoff_b
    left out."""

    m: int
    cutoff_b: int
    exact: bool
    eps_qft: float | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.cutoff_b < 1:
            raise ValueError("cutoff_b must be >= 1")

    @classmethod
    def exact_for(cls, m: int) -> "QftSpec":
        return cls(m=m, cutoff_b=m + 1, exact=True)

    @classmethod
    def for_budget(cls, m: int, eps_qft: float) -> "QftSpec":
        """Cutoff guaranteeing ||F~ - F||_2 <= eps_qft for m <= 12."""
        if eps_qft <= 0:
            raise ValueError("eps_qft must be positive")
        b = math.ceil(math.log2(m / eps_qft)) + 2
        return cls(m=m, cutoff_b=b, exact=b > m, eps_qft=eps_qft)


def qft(spec: QftSpec) -> CircuitOp:
    """Textbook circuit: H plus kept controlled phases, then reversal swaps.

    Matches the DFT with kernel exp(+2 pi i jk / 2**m) when exact.
    """
    m = spec.m
    steps = []
    for j in range(m):
        steps.append((hadamard(), (j,)))
        for j2 in range(j + 1, m):
            k = j2 - j + 1
            if spec.exact or k <= spec.cutoff_b:
                steps.append((cphase(2 * math.pi / (1 << k)), (j2, j)))
    for i in range(m // 2):
        steps.append((swap_gate(), (i, m - 1 - i)))
    return SequenceOp(m, steps)


def qft_two_qubit_count(m: int, cutoff_b: int | None = None) -> int:
    """Closed-form two-qubit gate count of the (truncated) QFT circuit."""
    total = 0
    for k in range(2, m + 1):
        if cutoff_b is None or k <= cutoff_b:
            total += m - k + 1
    return total + (m // 2)


def centered_qft(spec: QftSpec) -> CircuitOp:
    """Five-factor centered transform F . sz . F . sz . F^-1.

    sz acts on the least significant qubit, which makes the operator equal
    X^L . F . X^L (X the cyclic shift) when the QFT is exact.
    """
    f = qft(spec)
    f_inv = adjoint(f)
    sz = pauli_z()
    m = spec.m
    lsq = (m - 1,)
    every = tuple(range(m))
    return SequenceOp(m, [
        (f_inv, every), (sz, lsq), (f, every), (sz, lsq), (f, every),
    ])


# ---------------------------------------------------------------------------
# B-hat and B


def _padded_phi(params: KernelParams) -> tuple[np.ndarray, int]:
    """phi placed symmetrically on the smallest power-of-two register.

    When 2 L* is not a power of two the amplitudes sit centered at index
    2**(k-1), so the centering shift lands l exactly on index l + L.
    """
    phi = phi_amplitudes(params)
    two_lstar = phi.shape[0]
    k = max(1, math.ceil(math.log2(two_lstar)))
    padded = np.zeros(1 << k, dtype=np.complex128)
    mid = 1 << (k - 1)
    padded[mid - params.Lstar: mid + params.Lstar] = phi
    return padded, k


def build_B_hat(params: KernelParams, spec: QftSpec) -> CircuitOp:
    """Gaussian body: rotation tree, centering, centered QFT on m qubits."""
    if spec.m != params.m:
        raise ValueError("QFT width must equal params.m")
    padded, k = _padded_phi(params)
    m = params.m
    if k > m:
        raise ValueError("Lstar register exceeds the data register")
    tree = rotation_tree_prep(padded)
    steps = [(tree, tuple(range(m - k, m)))]
    if k < m:
        steps.append((centering_circuit(k, m), tuple(range(m))))
    steps.append((centered_qft(spec), tuple(range(m))))
    return SequenceOp(m, steps)


def bhat_state(params: KernelParams, spec: QftSpec) -> np.ndarray:
    """Amplitudes of B-hat |0...0>."""
    op = build_B_hat(params, spec)
    return apply(op, StateVector.computational(params.m)).amplitudes.copy()


def extract_betas(params: KernelParams, spec: QftSpec) -> np.ndarray:
    """|beta_l| for -L <= l <= L-1 read off B-hat: 2 |amplitude(l + L)|^2."""
    return 2 * np.abs(bhat_state(params, spec)) ** 2


@dataclass(frozen=True)
class BOperator:
    """The full coefficient-preparation unitary on n = m + 2 qubits.

    ``beta_magnitudes[i]`` holds |beta_l| for l = i - L, covering the body
    (-L .. L-1) and the three header terms (L, L+1, L+2); ``s`` is their sum.
    """

    n: int
    op: CircuitOp
    beta_magnitudes: np.ndarray
    s: float

    @property
    def footprint(self) -> ResourceFootprint:
        return self.op.footprint


def header_beta() -> float:
    """(1/sin(pi/10) - 3) / 2, the two matched padding coefficients."""
    return (1 / math.sin(OAA_ANGLE) - 3) / 2


def build_B(params: KernelParams, spec: QftSpec) -> BOperator:
    """Header preparation plus B-hat conditioned on the header being |00>.

    The header column is (sqrt(2), sqrt(beta_L), sqrt(beta_{L+1}),
    sqrt(beta_{L+2})) / sqrt(s) with positive square roots; beta_L = 1 and
    the last two terms cancel in the LCU, making s = 1/sin(pi/10) exactly.
    """
    m = params.m
    n = m + 2
    b_pad = header_beta()
    s = 2.0 + 1.0 + 2.0 * b_pad
    column = np.array([math.sqrt(2.0), 1.0, math.sqrt(b_pad), math.sqrt(b_pad)])
    column /= math.sqrt(s)
    header = DenseOp(
        _householder_completion(column),
        ResourceFootprint(two_qubit_gates=3, one_qubit_gates=4,
                          modeled=frozenset({"header_prep_const"})),
    )

    bhat = build_B_hat(params, spec)
    # decomposition model for the |00>-conditioned body: twice the
    # uncontrolled two-qubit count
    ctrl_cost = ResourceFootprint(
        queries_u=bhat.footprint.queries_u,
        two_qubit_gates=2 * bhat.footprint.two_qubit_gates,
        one_qubit_gates=bhat.footprint.one_qubit_gates,
        ancilla_qubits=bhat.footprint.ancilla_qubits,
        modeled=bhat.footprint.modeled | {"controlled_prep_x2"},
    )
    conditioned = ControlledOp(bhat, num_controls=2, pattern=0,
                               footprint=ctrl_cost)

    op = SequenceOp(n, [(header, (0, 1)), (conditioned, tuple(range(n)))])

    body = extract_betas(params, spec)
    betas = np.concatenate([body, [1.0, b_pad, b_pad]])
    s_actual = float(np.sum(betas))
    return BOperator(n=n, op=op, beta_magnitudes=betas, s=s_actual)


def _householder_completion(column: np.ndarray) -> np.ndarray:
    """Real orthogonal matrix whose first column is the given unit vector."""
    dim = column.shape[0]
    e0 = np.zeros(dim)
    e0[0] = 1.0
    w = e0 - column
    nw = np.linalg.norm(w)
    if nw < 1e-14:
        return np.eye(dim)
    w /= nw
    return np.eye(dim) - 2 * np.outer(w, w)
