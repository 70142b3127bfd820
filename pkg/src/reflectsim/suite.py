"""Runnable verification suite.

Each check evaluates one acceptance property end to end and returns a
CheckResult with the measured numbers; the pytest acceptance module and
the ``verify-suite`` CLI subcommand both drive these functions.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
import time

import numpy as np

from . import accounting
from .core_sim import (
    RegisterLayout,
    StateVector,
    apply,
    embed_system,
    op_matrix,
    unitarity_defect,
)
from .gaussian_kernel import (
    alpha_coeffs,
    kernel_sup_on_gap,
    kernel_value,
    poisson_check,
    select_params,
)
from .lcu_reflector import (
    ancilla_reflection,
    build_reflector,
    build_select,
    oaa_expansion_check,
    reflection_error,
)
from .pea_reflector import (
    block_leakage,
    build_pea_reflector,
    choose_pea_params,
)
from .spectral_models import (
    exact_reflection,
    grover_unitary,
    synth_unitary,
)
from .state_prep import (
    OAA_ANGLE,
    QftSpec,
    bhat_state,
    build_B,
    build_B_hat,
    centered_qft,
    centering_circuit,
    centering_offset,
    qft,
    rotation_tree_prep,
)

EPS_GRID = (1e-1, 1e-2, 1e-3)
DELTA_GRID = (0.5, 0.1, 0.02)
KERNEL_C = 40.0

# the D = 8 instance shared by the end-to-end checks
_INSTANCE_DIM = 8
_INSTANCE_GAP = 0.5
_INSTANCE_SEED = 7
_TRIAL_SEED = 11


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: dict

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        keys = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items())
        return f"{status} {self.name}: {keys}"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def _budget_spec(params, eps: float) -> QftSpec:
    """Default truncation budget: half of eps to the QFT side, a third of
    that per centered-transform factor."""
    return QftSpec.for_budget(params.m, eps / 6)


def _trig_poly_sup(coeffs: np.ndarray, L: int, points: int = 1000) -> float:
    """sup over [0, 2 pi) of |sum_l coeffs[l + L] e^{i l lam}|."""
    grid = np.linspace(0.0, 2 * math.pi, points, endpoint=False)
    ls = np.arange(-L, L)
    sup = 0.0
    step = max(1, (1 << 22) // (2 * L))
    for i in range(0, grid.shape[0], step):
        chunk = grid[i:i + step]
        vals = np.abs(np.exp(1j * np.outer(chunk, ls)) @ coeffs)
        sup = max(sup, float(vals.max()))
    return sup


def check_kernel_bounds() -> CheckResult:
    """Value 1 at phase 0 and magnitude <= eps on the gapped region, for
    every (eps, delta) pair on the acceptance grid."""
    t0 = time.perf_counter()
    worst_zero = 0.0
    worst_sup = 0.0
    ok = True
    for eps in EPS_GRID:
        for delta in DELTA_GRID:
            params = select_params(eps, delta, KERNEL_C)
            at_zero = abs(kernel_value(0.0, params) - 1.0)
            sup = kernel_sup_on_gap(params, points=1000)
            worst_zero = max(worst_zero, at_zero / eps)
            worst_sup = max(worst_sup, sup / eps)
            ok = ok and at_zero <= eps and sup <= eps
    seconds = time.perf_counter() - t0
    ok = ok and seconds < 10.0
    return CheckResult("kernel_bounds", ok, {
        "max_zero_defect_over_eps": worst_zero,
        "max_gap_sup_over_eps": worst_sup,
        "seconds": seconds,
    })


def _centered_phi_vector(params) -> np.ndarray:
    from .gaussian_kernel import phi_amplitudes
    vec = np.zeros(2 * params.L, dtype=np.complex128)
    phi = phi_amplitudes(params)
    vec[params.L - params.Lstar: params.L + params.Lstar] = phi
    return vec


def check_state_prep_chain() -> CheckResult:
    """||psi - Fc phi|| <= eps with the exact transform and
    ||psi - Bhat|0>|| <= 2 eps at the default truncation budget."""
    from .gaussian_kernel import psi_amplitudes
    t0 = time.perf_counter()
    worst_exact = 0.0
    worst_trunc = 0.0
    ok = True
    for eps in EPS_GRID:
        for delta in DELTA_GRID:
            params = select_params(eps, delta, KERNEL_C)
            psi = psi_amplitudes(params)
            phi_vec = _centered_phi_vector(params)
            fc = centered_qft(QftSpec.exact_for(params.m))
            out = apply(fc, StateVector(params.m, phi_vec)).amplitudes
            err_exact = float(np.linalg.norm(psi - out))
            trunc = bhat_state(params, _budget_spec(params, eps))
            err_trunc = float(np.linalg.norm(psi - trunc))
            worst_exact = max(worst_exact, err_exact / eps)
            worst_trunc = max(worst_trunc, err_trunc / eps)
            ok = ok and err_exact <= eps and err_trunc <= 2 * eps
    seconds = time.perf_counter() - t0
    ok = ok and seconds < 30.0
    return CheckResult("state_prep_chain", ok, {
        "max_exact_err_over_eps": worst_exact,
        "max_trunc_err_over_eps": worst_trunc,
        "seconds": seconds,
    })


def check_scalar_lcu() -> CheckResult:
    """sup over the circle of |sum (alpha_l - |beta_l|/2) e^{i l lam}| <= 10 eps
    with beta extracted from the built B-hat."""
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for eps in EPS_GRID:
        for delta in DELTA_GRID:
            params = select_params(eps, delta, KERNEL_C)
            alphas = alpha_coeffs(params).alphas
            betas = 2 * np.abs(bhat_state(params, _budget_spec(params, eps))) ** 2
            diff = alphas - betas / 2
            sup = _trig_poly_sup(diff.astype(np.complex128), params.L)
            worst = max(worst, sup / eps)
            ok = ok and sup <= 10 * eps
    seconds = time.perf_counter() - t0
    return CheckResult("scalar_lcu_consistency", ok, {
        "max_sup_over_eps": worst,
        "seconds": seconds,
    })


def _instance():
    return synth_unitary(_INSTANCE_DIM, _INSTANCE_GAP, _INSTANCE_SEED)


def check_lcu_reflection() -> CheckResult:
    """End-to-end ||A|0>|xi> - |0> R |xi>|| <= 10 eps over 20 Haar trials,
    improving when eps shrinks tenfold."""
    t0 = time.perf_counter()
    unitary = _instance()
    refl2 = build_reflector(unitary, 1e-2, c=KERNEL_C)
    err2 = reflection_error(refl2.a, refl2.n_ancilla, unitary, 20, _TRIAL_SEED)
    refl3 = build_reflector(unitary, 1e-3, c=KERNEL_C)
    err3 = reflection_error(refl3.a, refl3.n_ancilla, unitary, 20, _TRIAL_SEED)
    seconds = time.perf_counter() - t0
    ok = err2 <= 10 * 1e-2 and err3 <= 10 * 1e-3 and err3 < err2
    ok = ok and seconds < 120.0
    return CheckResult("lcu_reflection", ok, {
        "max_err_eps2": err2,
        "max_err_eps3": err3,
        "seconds": seconds,
    })


def check_oaa_algebra() -> CheckResult:
    """Three-term PAP expansion at 1e-10, s pinned to 1/sin(pi/10), and the
    degree-five sine identity at 1e-12."""
    t0 = time.perf_counter()
    unitary = _instance()
    refl = build_reflector(unitary, 1e-2, c=KERNEL_C)
    layout = RegisterLayout(refl.n_ancilla, refl.system_qubits)
    stats = oaa_expansion_check(refl.w, refl.r, layout, refl.s)
    s_defect = abs(refl.s - 1 / math.sin(OAA_ANGLE))
    x = math.sin(OAA_ANGLE)
    cheb = abs(5 * x - 20 * x ** 3 + 16 * x ** 5 - 1.0)
    ok = (
        stats["expansion_maxnorm"] <= 1e-10
        and s_defect <= 10 * 1e-2
        and cheb <= 1e-12
    )
    seconds = time.perf_counter() - t0
    return CheckResult("oaa_algebra", ok, {
        "expansion_maxnorm": stats["expansion_maxnorm"],
        "s_defect": s_defect,
        "chebyshev_defect": cheb,
        "seconds": seconds,
    })


def check_pea_baseline() -> CheckResult:
    """Per-block leakage below 1/16 on every gapped eigenvector, end-to-end
    error <= 10 eps, and exact-QFT invariance of |0>|psi_0| at 1e-10."""
    t0 = time.perf_counter()
    eps = 1e-2
    unitary = _instance()
    params = choose_pea_params(eps, unitary.gap)
    spec = QftSpec.for_budget(params.n_prime, 0.05)
    worst_p = 0.0
    for j in range(1, unitary.dimension):
        worst_p = max(worst_p, block_leakage(unitary, params.n_prime, spec, j))
    refl = build_pea_reflector(unitary, eps)
    err = reflection_error(refl.a, refl.n_ancilla, unitary, 5, _TRIAL_SEED)
    exact = build_pea_reflector(unitary, eps, exact_qft=True)
    layout = exact.layout()
    fixed = embed_system(unitary.psi0(), layout)
    moved = apply(exact.a, fixed)
    fix_err = float(np.linalg.norm(moved.amplitudes - fixed.amplitudes))
    seconds = time.perf_counter() - t0
    ok = worst_p <= 1 / 16 and err <= 10 * eps and fix_err <= 1e-10
    return CheckResult("pea_baseline", ok, {
        "max_block_leakage": worst_p,
        "max_err": err,
        "psi0_fix_err": fix_err,
        "n_prime": params.n_prime,
        "q": params.q,
        "seconds": seconds,
    })


def check_ancilla_scaling() -> CheckResult:
    """The headline comparison on eps {1e-2, 1e-4, 1e-8} at delta 1e-2."""
    t0 = time.perf_counter()
    table = accounting.compare_scaling(
        eps_grid=(1e-2, 1e-4, 1e-8), delta_grid=(1e-2,), c=KERNEL_C)
    rows = sorted(table.rows, key=lambda r: -r.epsilon)
    n_lcu = [r.n_lcu for r in rows]
    qs = [choose_pea_params(r.epsilon, r.delta).q for r in rows]
    ok = (
        qs[-1] >= 2 * qs[0]
        and n_lcu[-1] - n_lcu[0] <= 2
        and all(r.n_lcu <= r.n_pea for r in rows)
        and table.passed
    )
    seconds = time.perf_counter() - t0
    return CheckResult("ancilla_scaling", ok, {
        "n_lcu": tuple(n_lcu),
        "n_pea": tuple(r.n_pea for r in rows),
        "q": tuple(qs),
        "seconds": seconds,
    })


def check_grover_benchmark() -> CheckResult:
    """Search-derived family: failure probability inside the envelope,
    <s|R|s> = 0, and gap scaling ~ D^(-1/2)."""
    t0 = time.perf_counter()
    eps = 0.02
    dim = 64
    inst = grover_unitary(dim, marked=3)
    s_reflect = abs(
        inst.s_state @ (exact_reflection(inst.unitary) @ inst.s_state)
    )
    refl = build_reflector(inst.unitary, eps, c=KERNEL_C)
    layout = refl.layout()
    start = embed_system(inst.s_state, layout)
    out = apply(refl.a, start)
    t_idx = layout.index(0, inst.marked)
    nu = 1 - abs(out.amplitudes[t_idx]) ** 2
    envelope = 4 * (1 / math.sqrt(dim) + 10 * eps) ** 2
    gaps = {d: grover_unitary(d, marked=1).gap for d in (16, 64, 256)}
    scaled = [gaps[d] * math.sqrt(d) for d in (16, 64, 256)]
    scaling_ok = max(scaled) <= 2 * min(scaled)
    seconds = time.perf_counter() - t0
    ok = (
        nu <= envelope
        and s_reflect <= 1e-10
        and scaling_ok
        and seconds < 120.0
    )
    return CheckResult("grover_benchmark", ok, {
        "nu": nu,
        "nu_envelope": envelope,
        "s_reflection_defect": s_reflect,
        "gap_times_sqrtD": tuple(scaled),
        "seconds": seconds,
    })


def _structural_op_zoo():
    """Representative operators capped at 8 qubits for dense unitarity."""
    from .core_sim import cnot, cphase, hadamard, pauli_x, pauli_z, ry, swap_gate
    params = select_params(0.2, 1.5, KERNEL_C)
    spec = QftSpec.for_budget(params.m, 0.05)
    unitary = synth_unitary(2, 1.0, seed=3)
    b = build_B(params, spec)
    sel = build_select(params, unitary)
    from .lcu_reflector import build_A, build_W
    w = build_W(b, sel)
    a = build_A(w, ancilla_reflection(b.n), b.n)
    rng = np.random.default_rng(5)
    amps = np.abs(rng.normal(size=16)) + 0.01
    amps /= np.linalg.norm(amps)
    return [
        ("hadamard", hadamard()),
        ("pauli_x", pauli_x()),
        ("pauli_z", pauli_z()),
        ("cnot", cnot()),
        ("cphase", cphase(0.3)),
        ("swap", swap_gate()),
        ("ry", ry(1.1)),
        ("qft_exact_m5", qft(QftSpec.exact_for(5))),
        ("qft_trunc_m8", qft(QftSpec(m=8, cutoff_b=4, exact=False))),
        ("centered_qft_m5", centered_qft(QftSpec.exact_for(5))),
        ("centering_3_7", centering_circuit(3, 7)),
        ("rotation_tree", rotation_tree_prep(amps)),
        ("bhat", build_B_hat(params, spec)),
        ("b_full", b.op),
        ("select", sel.op),
        ("w", w),
        ("a", a),
        ("ancilla_reflection", ancilla_reflection(6)),
    ]


def check_structural() -> CheckResult:
    """Unitarity of every built operator, exact centering permutations,
    the dense centered-transform identity, and the Poisson identity."""
    t0 = time.perf_counter()
    worst_unitarity = 0.0
    for _, op in _structural_op_zoo():
        worst_unitarity = max(worst_unitarity, unitarity_defect(op))

    perm_ok = True
    for m in range(2, 9):
        for k in range(1, m):
            mat = op_matrix(centering_circuit(k, m))
            off = centering_offset(k, m)
            cols_one = (np.abs(np.abs(mat) - 1) < 1e-12).sum(axis=0)
            nonzero = (np.abs(mat) > 1e-12).sum(axis=0)
            perm_ok = perm_ok and bool(
                (cols_one == 1).all() and (nonzero == 1).all()
            )
            for j in range(1 << k):
                perm_ok = perm_ok and abs(mat[j + off, j] - 1.0) < 1e-12

    fc_defect = 0.0
    for m in range(1, 7):
        big_l = 1 << (m - 1)
        n = 1 << m
        js = np.arange(n)
        dft = np.exp(2j * math.pi * np.outer(js, js) / n) / math.sqrt(n)
        shift = np.roll(np.eye(n), big_l, axis=1)
        oracle = shift @ dft @ shift
        mat = op_matrix(centered_qft(QftSpec.exact_for(m)))
        fc_defect = max(fc_defect, float(np.abs(mat - oracle).max()))

    poisson_defect = 0.0
    for lam, dz, K in ((0.0, 0.5, 20), (1.3, 0.5, 20), (0.2, 10.0, 20),
                       (1.3 + 2 * math.pi, 0.5, 20), (2.8, 0.25, 30)):
        lhs, rhs = poisson_check(lam, dz, K)
        poisson_defect = max(poisson_defect, abs(lhs - rhs))

    seconds = time.perf_counter() - t0
    ok = (
        worst_unitarity <= 1e-10
        and perm_ok
        and fc_defect <= 1e-12
        and poisson_defect <= 1e-10
    )
    return CheckResult("structural", ok, {
        "max_unitarity_defect": worst_unitarity,
        "centering_exact": perm_ok,
        "centered_qft_defect": fc_defect,
        "poisson_defect": poisson_defect,
        "seconds": seconds,
    })


ALL_CHECKS = (
    ("kernel_bounds", check_kernel_bounds),
    ("state_prep_chain", check_state_prep_chain),
    ("scalar_lcu_consistency", check_scalar_lcu),
    ("lcu_reflection", check_lcu_reflection),
    ("oaa_algebra", check_oaa_algebra),
    ("pea_baseline", check_pea_baseline),
    ("ancilla_scaling", check_ancilla_scaling),
    ("grover_benchmark", check_grover_benchmark),
    ("structural", check_structural),
)


def run_all(names=None, echo=print) -> list[CheckResult]:
    results = []
    for name, fn in ALL_CHECKS:
        if names and name not in names:
            continue
        result = fn()
        if echo:
            echo(result.summary())
        results.append(result)
    return results
