"""Approximate reflection operators over eigenvectors of unitaries.

Two routes to ||A |0>|xi> - |0> R_psi0 |xi>|| <= eps: repeated phase
estimation, and a Gaussian linear combination of unitary powers amplified
by two rounds of oblivious amplitude amplification. Both are simulated
densely and verified against the exact rank-one reflection, with resource
ledgers for ancilla, query and gate counts.
"""

from .core_sim import (
    CircuitOp,
    RegisterLayout,
    ResourceFootprint,
    StateVector,
    adjoint,
    apply,
    distance,
    inner,
    op_matrix,
    project_ancilla_zero,
    unitarity_defect,
)
from .gaussian_kernel import (
    AlphaTable,
    KernelParams,
    alpha_coeffs,
    kernel_value,
    phi_amplitudes,
    poisson_check,
    psi_amplitudes,
    select_params,
)
from .spectral_models import (
    EigenUnitary,
    GroverInstance,
    exact_reflection,
    grover_unitary,
    hamiltonian_unitary,
    power_apply,
    synth_unitary,
)
from .state_prep import (
    BOperator,
    QftSpec,
    RotationTree,
    build_B,
    build_B_hat,
    centered_qft,
    centering_circuit,
    qft,
    rotation_tree_prep,
)
from .lcu_reflector import (
    ReflectorA,
    SelectU,
    ancilla_reflection,
    build_A,
    build_W,
    build_reflector,
    build_select,
    oaa_expansion_check,
    reflection_error,
    verify_reflection,
)
from .pea_reflector import (
    PeaParams,
    PeaReflector,
    build_A_pea,
    build_pea_reflector,
    build_W_pea,
    choose_pea_params,
    pea_block,
)
from .accounting import ResourceLedger, compare_scaling

__version__ = "0.1.0"
