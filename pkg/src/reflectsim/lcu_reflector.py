"""select(U-bar), W, the ancilla reflection R and the two-round OAA operator A.

The ancilla register is n = m + 2 qubits: a two-qubit header followed by m
data qubits. select applies U^(l - L) when the header is |00> (l the data
value), and the header-conditioned signs via Z on the second header qubit.
A = W R W' R W R W' R W amplifies the ancilla-|0> block of W into the
approximate reflection.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_sim import (
    CircuitOp,
    ControlledOp,
    DiagonalOp,
    RegisterLayout,
    ResourceFootprint,
    SequenceOp,
    adjoint,
    apply_batch,
    pauli_z,
    random_state,
)
from .gaussian_kernel import KernelParams, select_params
from .spectral_models import EigenUnitary, exact_reflection, power_op
from .state_prep import BOperator, QftSpec, build_B

DEFAULT_KERNEL_FRACTION = 0.5


def mcx_two_qubit_cost(num_controls: int) -> int:
    """Linear decomposition model for a multiply-controlled X with one
    helper qubit: 6 two-qubit gates per control beyond the first."""
    if num_controls <= 0:
        return 0
    if num_controls == 1:
        return 1
    return 6 * (num_controls - 1)


@dataclass(frozen=True)
class SelectU:
    """Controlled dispatch of the LCU unitaries.

    The footprint charges the raw cascade (the U^-L leg plus the binary
    cascade, 3L - 1 queries); ``queries_max_power`` reports the max-power
    counting convention of L queries per application used by the
    complexity comparison.
    """

    n: int
    L: int
    unitary: EigenUnitary
    op: CircuitOp
    queries_max_power: int

    @property
    def footprint(self) -> ResourceFootprint:
        return self.op.footprint


def build_select(params: KernelParams, unitary: EigenUnitary) -> SelectU:
    """Assemble select(U-bar) on (m + 2) ancilla plus system qubits.

    Follows the two-step description: Z on the second header qubit handles
    the -1/+1/-1 branches for headers |01>, |10>, |11>; conditioned on
    header |00>, U^-L and then controlled U^(2^i) legs per data bit.
    """
    m, L = params.m, params.L
    sys_q = unitary.system_qubits
    n = m + 2
    total = n + sys_q
    sys_targets = tuple(range(n, total))

    steps = [(pauli_z(), (1,))]
    steps.append((
        ControlledOp(power_op(unitary, -L), num_controls=2, pattern=0),
        (0, 1) + sys_targets,
    ))
    for j in range(m):
        power = 1 << (m - 1 - j)
        steps.append((
            ControlledOp(power_op(unitary, power), num_controls=3, pattern=1),
            (0, 1, 2 + j) + sys_targets,
        ))
    op = SequenceOp(total, steps)
    return SelectU(n=n, L=L, unitary=unitary, op=op,
                   queries_max_power=L * unitary.step_cost)


def ancilla_reflection(n: int) -> CircuitOp:
    """R = 2|0><0| - 1 on n qubits, as an exact diagonal.

    Gate cost follows the standard X-conjugated circuit: 2n X, 2 H, and
    a multiply-controlled X decomposed linearly with one helper qubit
    (modeled, not simulated).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    diag = -np.ones(1 << n)
    diag[0] = 1.0
    cost = ResourceFootprint(
        two_qubit_gates=mcx_two_qubit_cost(n - 1) if n > 1 else 0,
        one_qubit_gates=2 * n + 2,
        ancilla_qubits=1 if n > 2 else 0,
        modeled=frozenset({"mcx_linear"}),
    )
    return DiagonalOp(diag, cost)


def build_W(b: BOperator, sel: SelectU) -> CircuitOp:
    """W = (B' x 1) select(U-bar) (B x 1)."""
    total = sel.op.num_qubits
    if b.n != sel.n:
        raise ValueError("ancilla widths of B and select differ")
    anc = tuple(range(b.n))
    every = tuple(range(total))
    return SequenceOp(total, [
        (b.op, anc), (sel.op, every), (adjoint(b.op), anc),
    ])


@dataclass(frozen=True)
class ReflectorA:
    """The assembled LCU reflector and its bookkeeping."""

    w: CircuitOp
    r: CircuitOp
    a: CircuitOp
    params: KernelParams
    ledger: ResourceFootprint
    b: BOperator
    select: SelectU
    s: float
    n_ancilla: int
    system_qubits: int
    qft_spec: QftSpec

    def layout(self) -> RegisterLayout:
        return RegisterLayout(self.n_ancilla, self.system_qubits)

    def verify(self, unitary: EigenUnitary, trials: int, seed: int) -> float:
        return verify_reflection(self, unitary, trials, seed)


def build_A(w: CircuitOp, r: CircuitOp, n_ancilla: int) -> CircuitOp:
    """A = W R W' R W R W' R W; five W/W' uses, four R uses."""
    total = w.num_qubits
    anc = tuple(range(n_ancilla))
    every = tuple(range(total))
    wd = adjoint(w)
    return SequenceOp(total, [
        (w, every), (r, anc), (wd, every), (r, anc),
        (w, every), (r, anc), (wd, every), (r, anc),
        (w, every),
    ])


def build_reflector(unitary: EigenUnitary, eps: float, *,
                    c: float = 40.0,
                    kernel_fraction: float = DEFAULT_KERNEL_FRACTION,
                    exact_qft: bool = False) -> ReflectorA:
    """One-stop pipeline from a gapped unitary to the reflector A.

    The total error budget eps is split kernel_fraction to the Gaussian
    kernel chain and the rest to QFT truncation (a third of it per QFT
    factor of the centered transform).
    """
    if not 0 < kernel_fraction < 1:
        raise ValueError("kernel_fraction must lie strictly between 0 and 1")
    params = select_params(eps * kernel_fraction, unitary.gap, c)
    if exact_qft:
        spec = QftSpec.exact_for(params.m)
    else:
        spec = QftSpec.for_budget(params.m, eps * (1 - kernel_fraction) / 3)
    b = build_B(params, spec)
    sel = build_select(params, unitary)
    w = build_W(b, sel)
    r = ancilla_reflection(b.n)
    a = build_A(w, r, b.n)
    return ReflectorA(
        w=w, r=r, a=a, params=params, ledger=a.footprint, b=b, select=sel,
        s=b.s, n_ancilla=b.n, system_qubits=unitary.system_qubits,
        qft_spec=spec,
    )


# ---------------------------------------------------------------------------
# block extraction and verification


def ancilla_zero_block(op: CircuitOp, layout: RegisterLayout) -> np.ndarray:
    """<0_anc| op |0_anc> as a system-dimension matrix."""
    if op.num_qubits != layout.total_qubits:
        raise ValueError("operator width does not match layout")
    d = layout.system_dim
    cols = np.zeros((1 << layout.total_qubits, d), dtype=np.complex128)
    cols[:d, :] = np.eye(d)
    out = apply_batch(op, cols, layout.total_qubits)
    return out[:d, :]


def oaa_expansion_check(w: CircuitOp, r: CircuitOp, layout: RegisterLayout,
                        s: float) -> dict:
    """Compare PAP against the exact three-term expansion.

    Returns the max-norm mismatch of
    P A P = 5 PWP - 20 PWPW'PWP + 16 PWPW'PWPW'PWP
    (as system blocks), the coefficient defect |1 - 5/s + 20/s^3 - 16/s^5|,
    and the unitarity defect of the implied R-tilde = s <0|W|0>.
    """
    a = build_A(w, r, layout.ancilla_qubits)
    m_w = ancilla_zero_block(w, layout)
    m_a = ancilla_zero_block(a, layout)
    m_wd = m_w.conj().T
    rhs = 5 * m_w - 20 * m_w @ m_wd @ m_w \
        + 16 * m_w @ m_wd @ m_w @ m_wd @ m_w
    expansion = float(np.abs(m_a - rhs).max())

    x = 1 / s
    coeff = abs(1 - 5 * x + 20 * x ** 3 - 16 * x ** 5)

    r_tilde = s * m_w
    runitary = float(np.abs(
        np.eye(layout.system_dim) - r_tilde.conj().T @ r_tilde
    ).max())
    return {
        "expansion_maxnorm": expansion,
        "coefficient_defect": float(coeff),
        "rtilde_unitarity": runitary,
    }


def reflection_error(a_op: CircuitOp, num_ancilla: int,
                     unitary: EigenUnitary, trials: int, seed: int,
                     states: list[np.ndarray] | None = None) -> float:
    """max over trial states of || A |0>|xi> - |0> R_psi0 |xi> ||.

    The oracle R_psi0 is the exact rank-one reflection from the unitary's
    eigendecomposition. Haar trial states are drawn from the seed unless
    explicit system vectors are supplied.
    """
    if trials < 1 and not states:
        raise ValueError("need at least one trial")
    sys_q = unitary.system_qubits
    layout = RegisterLayout(num_ancilla, sys_q)
    refl = exact_reflection(unitary)
    rng = np.random.default_rng(seed)
    if states is None:
        states = [random_state(sys_q, rng).amplitudes for _ in range(trials)]
    d = layout.system_dim
    total_dim = 1 << layout.total_qubits
    # chunk the batch so big registers never hold more than ~2^23 amplitudes
    chunk = max(1, (1 << 23) // total_dim)
    worst = 0.0
    for start in range(0, len(states), chunk):
        part = states[start:start + chunk]
        cols = np.zeros((total_dim, len(part)), dtype=np.complex128)
        for i, xi in enumerate(part):
            cols[:d, i] = xi
        out = apply_batch(a_op, cols, layout.total_qubits)
        for i, xi in enumerate(part):
            target = np.zeros(total_dim, dtype=np.complex128)
            target[:d] = refl @ xi
            worst = max(worst, float(np.linalg.norm(out[:, i] - target)))
    return worst


def verify_reflection(reflector, unitary: EigenUnitary, trials: int,
                      seed: int) -> float:
    """Shared harness: works for any object exposing .a and .n_ancilla."""
    return reflection_error(reflector.a, reflector.n_ancilla, unitary,
                            trials, seed)
