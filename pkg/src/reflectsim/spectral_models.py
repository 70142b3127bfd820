"""Builders for unitaries with a certified eigenphase gap.

Synthetic Haar instances, the Grover lower-bound family, and the
Hamiltonian front-end U = exp(i(H - lambda0)). Every instance is stored by
eigendecomposition so integer powers are exact.
"""
from __future__ import annotations

from dataclasses import dataclass
import json
import math

import numpy as np
import scipy.linalg

from .core_sim import (
    CircuitOp,
    DenseOp,
    ResourceFootprint,
    StateVector,
    apply,
)

_BASIS_ATOL = 1e-10


@dataclass(frozen=True)
class EigenUnitary:
    """A unitary stored as eigenphases plus an orthonormal eigenbasis.

    eigenphases[0] is exactly 0 and belongs to the unique target eigenvector
    (column 0 of ``eigenbasis``); all other phases lie in [gap, 2 pi - gap].
    ``step_cost`` lets the ledger charge a user-supplied per-power query
    cost (e.g. when U itself is a simulated evolution), default 1.
    """

    dimension: int
    eigenphases: np.ndarray
    eigenbasis: np.ndarray
    gap: float
    step_cost: int = 1

    def __post_init__(self):
        phases = np.asarray(self.eigenphases, dtype=float).copy()
        basis = np.asarray(self.eigenbasis, dtype=np.complex128).copy()
        if phases.shape != (self.dimension,):
            raise ValueError("eigenphase count does not match dimension")
        if basis.shape != (self.dimension, self.dimension):
            raise ValueError("eigenbasis shape does not match dimension")
        if self.gap <= 0:
            raise ValueError("gap must be positive")
        if self.step_cost < 1:
            raise ValueError("step_cost must be >= 1")
        if phases[0] != 0.0:
            raise ValueError("target eigenphase must be exactly 0")
        others = phases[1:]
        tol = 1e-9
        if others.size and (
            others.min() < self.gap - tol or others.max() > 2 * math.pi - self.gap + tol
        ):
            raise ValueError("gapped eigenphases must lie in [gap, 2 pi - gap]")
        defect = np.abs(basis.conj().T @ basis - np.eye(self.dimension)).max()
        if defect > _BASIS_ATOL:
            raise ValueError(f"eigenbasis is not unitary (defect {defect:.3e})")
        phases.setflags(write=False)
        basis.setflags(write=False)
        object.__setattr__(self, "eigenphases", phases)
        object.__setattr__(self, "eigenbasis", basis)

    @property
    def system_qubits(self) -> int:
        n = self.dimension.bit_length() - 1
        if (1 << n) != self.dimension:
            raise ValueError("dimension is not a power of two")
        return n

    def psi0(self) -> np.ndarray:
        return self.eigenbasis[:, 0].copy()

    def matrix(self) -> np.ndarray:
        return self.power_matrix(1)

    def power_matrix(self, k: int) -> np.ndarray:
        """U^k via the eigendecomposition (exact for any signed integer k)."""
        phase = np.exp(1j * k * self.eigenphases)
        return (self.eigenbasis * phase) @ self.eigenbasis.conj().T

    def to_json_dict(self) -> dict:
        basis = self.eigenbasis
        return {
            "dimension": self.dimension,
            "eigenphases": [float(p) for p in self.eigenphases],
            "eigenbasis": [
                [[float(z.real), float(z.imag)] for z in row] for row in basis
            ],
            "gap": float(self.gap),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "EigenUnitary":
        basis = np.array(
            [[complex(re, im) for re, im in row] for row in data["eigenbasis"]],
            dtype=np.complex128,
        )
        return cls(
            dimension=int(data["dimension"]),
            eigenphases=np.array(data["eigenphases"], dtype=float),
            eigenbasis=basis,
            gap=float(data["gap"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "EigenUnitary":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class GroverInstance:
    """The search-derived unitary together with its exact ingredients."""

    dimension: int
    marked: int
    unitary: EigenUnitary
    s_state: np.ndarray
    psi_tilde: np.ndarray

    @property
    def gap(self) -> float:
        return self.unitary.gap


def synth_unitary(dimension: int, gap: float, seed: int) -> EigenUnitary:
    """Random instance: Haar eigenbasis, lambda_0 = 0, the rest uniform in
    [gap, 2 pi - gap]. Deterministic for a fixed seed."""
    if dimension < 2:
        raise ValueError("dimension must be >= 2")
    # gap == pi is allowed: the interval collapses to the single point pi
    if not 0 < gap <= math.pi:
        raise ValueError("gap must lie in (0, pi]")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dimension, dimension)) + 1j * rng.normal(
        size=(dimension, dimension)
    )
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    phases = np.zeros(dimension)
    phases[1:] = rng.uniform(gap, 2 * math.pi - gap, size=dimension - 1)
    return EigenUnitary(dimension=dimension, eigenphases=phases, eigenbasis=q,
                        gap=gap)


def _schur_eigensystem(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal eigensystem of a (normal) unitary via complex Schur."""
    t, q = scipy.linalg.schur(u, output="complex")
    return np.diag(t), q


def grover_unitary(dimension: int, marked: int) -> GroverInstance:
    """The search-derived unitary with a unique eigenvalue-1 eigenvector.

    U = -exp(-i arccos(1 - 2/D)) V^dagger R_s R_t V with
    V = 1 + (i - 1)|s><s|. The global phase is rotated so the eigenvalue
    nearest 1 becomes exactly 1; the gap is measured from the spectrum.
    """
    if dimension < 4 or (dimension & (dimension - 1)) != 0:
        raise ValueError("dimension must be a power of two >= 4")
    if not 0 <= marked < dimension:
        raise ValueError("marked index out of range")
    d = dimension
    s = np.full(d, 1 / math.sqrt(d))
    v = np.eye(d, dtype=np.complex128) + (1j - 1) * np.outer(s, s)
    r_s = 2 * np.outer(s, s) - np.eye(d)
    r_t = -np.eye(d)
    r_t[marked, marked] = 1.0
    theta = math.acos(1 - 2 / d)
    u = -np.exp(-1j * theta) * v.conj().T @ r_s @ r_t @ v

    eigvals, basis = _schur_eigensystem(u)
    i0 = int(np.argmin(np.abs(eigvals - 1)))
    phase0 = float(np.angle(eigvals[i0]))
    phases = np.mod(np.angle(eigvals) - phase0, 2 * math.pi)
    phases[i0] = 0.0

    order = [i0] + [j for j in range(d) if j != i0]
    phases = phases[order]
    basis = basis[:, order]
    dist = np.minimum(phases[1:], 2 * math.pi - phases[1:])
    gap = float(dist.min())

    unitary = EigenUnitary(dimension=d, eigenphases=phases, eigenbasis=basis,
                           gap=gap)
    psi_tilde = (s + _basis_vec(d, marked)) / math.sqrt(
        2 * (1 + 1 / math.sqrt(d))
    )
    return GroverInstance(dimension=d, marked=marked, unitary=unitary,
                          s_state=s, psi_tilde=psi_tilde)


def _basis_vec(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim)
    v[index] = 1.0
    return v


def hamiltonian_unitary(hamiltonian: np.ndarray, lambda0: float) -> EigenUnitary:
    """U = exp(i (H - lambda0)) by exact eigendecomposition of H.

    Requires ||H|| <= 1, lambda0 within 1e-8 of a non-degenerate eigenvalue.
    """
    h = np.asarray(hamiltonian, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("Hamiltonian must be square")
    if np.abs(h - h.conj().T).max() > 1e-10:
        raise ValueError("Hamiltonian must be Hermitian")
    evals, evecs = np.linalg.eigh(h)
    if np.abs(evals).max() > 1 + 1e-10:
        raise ValueError("Hamiltonian norm exceeds 1")
    near = np.where(np.abs(evals - lambda0) <= 1e-8)[0]
    if near.size == 0:
        raise ValueError("lambda0 is not an eigenvalue of H (tolerance 1e-8)")
    if near.size > 1:
        raise ValueError("target eigenvalue is degenerate")
    i0 = int(near[0])
    # |H - lambda0| <= 2 < pi, so phases never wrap past the gap region
    phases = np.mod(evals - evals[i0], 2 * math.pi)
    phases[i0] = 0.0
    order = [i0] + [j for j in range(evals.size) if j != i0]
    phases = phases[order]
    basis = evecs[:, order]
    dist = np.minimum(phases[1:], 2 * math.pi - phases[1:])
    gap = float(dist.min())
    return EigenUnitary(dimension=h.shape[0], eigenphases=phases,
                        eigenbasis=basis, gap=gap)


def power_op(unitary: EigenUnitary, k: int) -> CircuitOp:
    """U^k as a dense operator charging |k| * step_cost queries."""
    return DenseOp(
        unitary.power_matrix(k),
        ResourceFootprint(queries_u=abs(k) * unitary.step_cost),
    )


def power_apply(unitary: EigenUnitary, k: int, state: StateVector) -> StateVector:
    """Apply U^k to a whole-register state of matching dimension."""
    if state.dim != unitary.dimension:
        raise ValueError("state dimension does not match unitary")
    return apply(power_op(unitary, k), state)


def exact_reflection(unitary: EigenUnitary) -> np.ndarray:
    """2|psi0><psi0| - 1, the ground-truth reflection used by verification."""
    psi = unitary.psi0()
    return 2 * np.outer(psi, psi.conj()) - np.eye(unitary.dimension)
