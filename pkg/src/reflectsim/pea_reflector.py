"""Phase-estimation baseline reflector: q parallel PEA registers, inverse
(optionally truncated) QFTs, the multiply-controlled ancilla reflection and
A = W' R W.

Blocks are applied sequentially to a shared system register; on an
eigenvector the all-zero ancilla amplitude factorizes over the blocks.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

from .core_sim import (
    CircuitOp,
    ControlledOp,
    RegisterLayout,
    ResourceFootprint,
    SequenceOp,
    adjoint,
    apply,
    densify,
    embed_system,
    hadamard,
    project_ancilla_zero,
)
from .lcu_reflector import ancilla_reflection
from .spectral_models import EigenUnitary, power_op
from .state_prep import QftSpec, qft

# "constant precision" per-QFT truncation; correctness is insensitive to it
# because the all-zero ancilla amplitude is unchanged by dropped phases
DEFAULT_PEA_QFT_EPS = 0.05


@dataclass(frozen=True)
class PeaParams:
    """Register width n' and repetition count q for target (eps, delta)."""

    n_prime: int
    q: int
    epsilon: float
    delta: float

    def __post_init__(self):
        if self.n_prime < 1 or self.q < 1:
            raise ValueError("n_prime and q must be >= 1")

    @property
    def total_ancilla(self) -> int:
        return self.n_prime * self.q


def choose_pea_params(epsilon: float, delta: float) -> PeaParams:
    """n' = ceil(log2(4 / sin(delta/2))) caps the per-register ancilla-zero
    amplitude at 1/4 on the gapped region; q = ceil(log16(4/eps^2)) then
    forces 2 (1/4)^q <= eps."""
    if not 0 < epsilon <= 0.2:
        raise ValueError("epsilon must lie in (0, 1/5]")
    if not 0 < delta <= math.pi:
        raise ValueError("delta must lie in (0, pi]")
    n_prime = math.ceil(math.log2(4 / math.sin(delta / 2)))
    q = math.ceil(math.log(4 / epsilon ** 2) / math.log(16))
    return PeaParams(n_prime=max(1, n_prime), q=max(1, q),
                     epsilon=epsilon, delta=delta)


def pea_block(unitary: EigenUnitary, n_prime: int,
              qft_spec: QftSpec) -> CircuitOp:
    """One phase-estimation register: Hadamards, controlled U^(2^j) legs
    charging 2^j queries each (total 2^n' - 1), then the inverse QFT.

    The ancilla-local layers (the Hadamard wall and the inverse QFT) are
    collapsed to dense matrices when narrow enough; this changes nothing
    semantically and keeps wide multi-register simulations affordable.
    """
    if qft_spec.m != n_prime:
        raise ValueError("QFT width must equal n_prime")
    sys_q = unitary.system_qubits
    total = n_prime + sys_q
    anc = tuple(range(n_prime))
    sys_targets = tuple(range(n_prime, total))
    h_wall = SequenceOp(n_prime, [(hadamard(), (q,)) for q in range(n_prime)])
    iqft = adjoint(qft(qft_spec))
    if n_prime <= 10:
        h_wall = densify(h_wall)
        iqft = densify(iqft)
    steps = [(h_wall, anc)]
    for qubit in range(n_prime):
        power = 1 << (n_prime - 1 - qubit)
        steps.append((
            ControlledOp(power_op(unitary, power), num_controls=1, pattern=1),
            (qubit,) + sys_targets,
        ))
    steps.append((iqft, anc))
    return SequenceOp(total, steps)


def build_W_pea(unitary: EigenUnitary, params: PeaParams,
                qft_spec: QftSpec) -> CircuitOp:
    """q blocks on disjoint ancilla registers sharing the system."""
    sys_q = unitary.system_qubits
    n_total = params.total_ancilla
    total = n_total + sys_q
    block = pea_block(unitary, params.n_prime, qft_spec)
    sys_targets = tuple(range(n_total, total))
    steps = []
    for i in range(params.q):
        anc = tuple(range(i * params.n_prime, (i + 1) * params.n_prime))
        steps.append((block, anc + sys_targets))
    return SequenceOp(total, steps)


def build_A_pea(w: CircuitOp, n_total_ancilla: int) -> CircuitOp:
    """A = W' R W with R the multiply-controlled ancilla reflection."""
    total = w.num_qubits
    r = ancilla_reflection(n_total_ancilla)
    anc = tuple(range(n_total_ancilla))
    every = tuple(range(total))
    return SequenceOp(total, [(w, every), (r, anc), (adjoint(w), every)])


@dataclass(frozen=True)
class PeaReflector:
    """Assembled PEA reflector; shares the verification harness with the
    LCU route through .a and .n_ancilla."""

    w: CircuitOp
    a: CircuitOp
    params: PeaParams
    qft_spec: QftSpec
    n_ancilla: int
    system_qubits: int
    ledger: ResourceFootprint

    def layout(self) -> RegisterLayout:
        return RegisterLayout(self.n_ancilla, self.system_qubits)


def build_pea_reflector(unitary: EigenUnitary, eps: float, *,
                        qft_eps: float = DEFAULT_PEA_QFT_EPS,
                        exact_qft: bool = False) -> PeaReflector:
    params = choose_pea_params(eps, unitary.gap)
    if exact_qft:
        spec = QftSpec.exact_for(params.n_prime)
    else:
        spec = QftSpec.for_budget(params.n_prime, qft_eps)
    w = build_W_pea(unitary, params, spec)
    a = build_A_pea(w, params.total_ancilla)
    return PeaReflector(w=w, a=a, params=params, qft_spec=spec,
                        n_ancilla=params.total_ancilla,
                        system_qubits=unitary.system_qubits,
                        ledger=a.footprint)


def block_leakage(unitary: EigenUnitary, n_prime: int, qft_spec: QftSpec,
                  eigen_index: int) -> float:
    """|p| = squared ancilla-|0> amplitude of one block on an eigenvector."""
    block = pea_block(unitary, n_prime, qft_spec)
    layout = RegisterLayout(n_prime, unitary.system_qubits)
    state = embed_system(unitary.eigenbasis[:, eigen_index], layout)
    out = apply(block, state)
    _, weight = project_ancilla_zero(out, layout)
    return weight


def leakage_amplitude_bound(n_prime: int, delta: float) -> float:
    """Geometric-series bound 1 / (2^n' sin(delta/2)) on the per-register
    ancilla-zero amplitude over the gapped region."""
    return 1 / ((1 << n_prime) * math.sin(delta / 2))
