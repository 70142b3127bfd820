"""Gapped-unitary builders: synthetic, Grover family, Hamiltonian front-end."""
import math

import numpy as np
import pytest
import scipy.linalg

from reflectsim.core_sim import StateVector
from reflectsim.spectral_models import (
    EigenUnitary,
    exact_reflection,
    grover_unitary,
    hamiltonian_unitary,
    power_apply,
    power_op,
    synth_unitary,
)


class TestSynthUnitary:
    def test_deterministic(self):
        a = synth_unitary(8, 0.5, seed=7)
        b = synth_unitary(8, 0.5, seed=7)
        assert np.array_equal(a.eigenbasis, b.eigenbasis)
        assert np.array_equal(a.eigenphases, b.eigenphases)

    def test_gap_pi_collapses_interval(self):
        u = synth_unitary(2, math.pi, seed=1)
        assert sorted(u.eigenphases) == pytest.approx([0.0, math.pi])

    def test_phases_verified_by_rediagonalization(self):
        # oracle: Schur-diagonalize the assembled matrix independently
        u = synth_unitary(8, 0.5, seed=3)
        t, _ = scipy.linalg.schur(u.matrix(), output="complex")
        phases = np.sort(np.mod(np.angle(np.diag(t)), 2 * math.pi))
        phases[phases > 2 * math.pi - 1e-9] = 0.0
        got = np.sort(np.mod(u.eigenphases, 2 * math.pi))
        assert np.abs(np.sort(phases) - got).max() < 1e-8
        gapped = got[got > 1e-12]
        assert gapped.min() >= 0.5 - 1e-12
        assert gapped.max() <= 2 * math.pi - 0.5 + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            synth_unitary(1, 0.5, seed=0)
        with pytest.raises(ValueError):
            synth_unitary(4, 3.5, seed=0)

    def test_fixes_target(self):
        for seed in (0, 1, 2):
            u = synth_unitary(6, 0.3, seed=seed)
            psi = u.psi0()
            assert np.abs(u.matrix() @ psi - psi).max() < 1e-10


class TestPowers:
    def test_zero_power_identity_and_free(self):
        u = synth_unitary(4, 0.5, seed=2)
        op = power_op(u, 0)
        assert np.abs(op.matrix - np.eye(4)).max() < 1e-12
        assert op.footprint.queries_u == 0

    def test_eigen_relation(self):
        u = synth_unitary(4, 0.5, seed=2)
        j = 2
        psi = u.eigenbasis[:, j]
        out = u.power_matrix(1) @ psi
        assert np.abs(out - np.exp(1j * u.eigenphases[j]) * psi).max() < 1e-12

    def test_inverse_composition(self):
        u = synth_unitary(8, 0.5, seed=4)
        state = StateVector(3, u.eigenbasis @
                            (np.ones(8) / math.sqrt(8)))
        back = power_apply(u, 3, power_apply(u, -3, state))
        assert np.abs(back.amplitudes - state.amplitudes).max() < 1e-12

    def test_additivity(self):
        u = synth_unitary(8, 0.5, seed=5)
        state = StateVector.computational(3, 5)
        one = power_apply(u, 7, state)
        two = power_apply(u, 3, power_apply(u, 4, state))
        assert np.abs(one.amplitudes - two.amplitudes).max() < 1e-11

    def test_query_charges(self):
        u = synth_unitary(4, 0.5, seed=2)
        assert power_op(u, -5).footprint.queries_u == 5
        assert power_op(u, 8).footprint.queries_u == 8

    def test_step_cost_multiplies(self):
        u = synth_unitary(4, 0.5, seed=2)
        costly = EigenUnitary(u.dimension, u.eigenphases, u.eigenbasis,
                              u.gap, step_cost=3)
        assert power_op(costly, 4).footprint.queries_u == 12

    def test_dimension_mismatch(self):
        u = synth_unitary(4, 0.5, seed=2)
        with pytest.raises(ValueError):
            power_apply(u, 1, StateVector.computational(3))


class TestGrover:
    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            grover_unitary(12, 0)

    def test_s_reflection_is_zero(self):
        inst = grover_unitary(64, 3)
        val = inst.s_state @ (exact_reflection(inst.unitary) @ inst.s_state)
        assert abs(val) <= 1e-10

    def test_gap_scales_like_inverse_sqrt_dimension(self):
        gaps = {d: grover_unitary(d, 1).gap for d in (16, 64, 256)}
        scaled = [gaps[d] * math.sqrt(d) for d in (16, 64, 256)]
        assert max(scaled) <= 2 * min(scaled)
        for d, g in gaps.items():
            # closed form: the 2D invariant subspace gives gap 2 arccos(1-2/D)
            assert g == pytest.approx(2 * math.acos(1 - 2 / d), abs=1e-10)

    def test_overlap_with_exact_target(self):
        inst = grover_unitary(64, 5)
        ov = abs(np.vdot(inst.unitary.psi0(), inst.psi_tilde)) ** 2
        assert ov >= 0.9

    def test_exact_target_reflection_maps_s_to_t(self):
        inst = grover_unitary(32, 9)
        r = 2 * np.outer(inst.psi_tilde, inst.psi_tilde.conj()) - np.eye(32)
        out = r @ inst.s_state
        t = np.zeros(32)
        t[9] = 1.0
        assert np.abs(out - t).max() < 1e-10

    def test_exact_reflection_failure_probability(self):
        # nu = 1 - |<t| R_psi0 |s>|^2 equals exactly 1/D at eps_num = 0
        for d in (16, 64):
            inst = grover_unitary(d, 2)
            out = exact_reflection(inst.unitary) @ inst.s_state
            nu = 1 - abs(out[2]) ** 2
            assert nu == pytest.approx(1 / d, abs=1e-10)

    def test_unique_unit_eigenvalue(self):
        inst = grover_unitary(16, 0)
        phases = inst.unitary.eigenphases
        assert (np.abs(phases) < 1e-12).sum() == 1


class TestHamiltonian:
    def test_diagonal_case(self):
        u = hamiltonian_unitary(np.diag([0.2, 0.9]), 0.2)
        assert sorted(u.eigenphases) == pytest.approx([0.0, 0.7])

    def test_pauli_x_over_two(self):
        h = np.array([[0, 0.5], [0.5, 0]])
        u = hamiltonian_unitary(h, -0.5)
        assert sorted(u.eigenphases) == pytest.approx([0.0, 1.0])

    def test_random_hermitian_unitary(self):
        rng = np.random.default_rng(11)
        g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        h = (g + g.conj().T) / 2
        h /= np.abs(np.linalg.eigvalsh(h)).max() * 1.5
        lam0 = float(np.linalg.eigvalsh(h)[0])
        u = hamiltonian_unitary(h, lam0)
        mat = u.matrix()
        assert np.abs(mat.conj().T @ mat - np.eye(8)).max() < 1e-10
        # agrees with the direct exponential
        direct = scipy.linalg.expm(1j * (h - lam0 * np.eye(8)))
        assert np.abs(mat - direct).max() < 1e-9

    def test_errors(self):
        with pytest.raises(ValueError):
            hamiltonian_unitary(np.diag([1.5, 0.0]), 0.0)
        with pytest.raises(ValueError):
            hamiltonian_unitary(np.diag([0.2, 0.9]), 0.5)
        with pytest.raises(ValueError):
            hamiltonian_unitary(np.diag([0.3, 0.3, 0.9]), 0.3)
        with pytest.raises(ValueError):
            hamiltonian_unitary(np.array([[0, 1.0], [0, 0]]), 0.0)


class TestEigenUnitaryType:
    def test_fixes_psi0_across_builders(self):
        for u in (synth_unitary(8, 0.5, 7), grover_unitary(16, 3).unitary,
                  hamiltonian_unitary(np.diag([0.1, 0.6, 0.9]), 0.1)):
            psi = u.psi0()
            assert np.abs(u.matrix() @ psi - psi).max() < 1e-10

    def test_rejects_nonzero_target_phase(self):
        with pytest.raises(ValueError):
            EigenUnitary(2, np.array([0.1, 1.0]), np.eye(2), gap=0.5)

    def test_rejects_phase_outside_gap(self):
        with pytest.raises(ValueError):
            EigenUnitary(2, np.array([0.0, 0.1]), np.eye(2), gap=0.5)

    def test_json_roundtrip_exact(self):
        u = synth_unitary(8, 0.5, seed=13)
        back = EigenUnitary.from_json(u.to_json())
        assert np.array_equal(back.eigenphases, u.eigenphases)
        assert np.array_equal(back.eigenbasis, u.eigenbasis)
        assert back.gap == u.gap and back.dimension == u.dimension
