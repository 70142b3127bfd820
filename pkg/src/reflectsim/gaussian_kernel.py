"""Gaussian kernel parameters and coefficient tables.

Selects (dz, L, L*) so that the truncated Gaussian-weighted sum of unitary
powers behaves as a reflection kernel: value 1 at eigenphase 0, magnitude
at most eps on the gapped region [delta, 2*pi - delta]. ``kernel_value`` is
the scalar brute-force oracle that every operator-level test compares
against.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

DEFAULT_C = 40.0

# relative slack for float-edge re-validation of the selection inequalities
_REL_TOL = 1e-9


@dataclass(frozen=True)
class KernelParams:
    """All kernel-selection parameters. L is a power of two, m = log2(2L)."""

    epsilon: float
    delta: float
    c: float
    dz: float
    L: int
    Lstar: int
    m: int

    def __post_init__(self):
        if not 0 < self.epsilon <= 0.2:
            raise ValueError("epsilon must lie in (0, 1/5]")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.c <= 1:
            raise ValueError("c must exceed 1")
        if self.dz <= 0:
            raise ValueError("dz must be positive")
        if self.L != 1 << (self.m - 1):
            raise ValueError("L must equal 2**(m-1)")
        if not 1 <= self.Lstar <= self.L:
            raise ValueError("Lstar must lie in [1, L]")
        e, c, dz, L = self.epsilon, self.c, self.dz, self.L
        slack = 1 + _REL_TOL
        if dz > slack * math.pi / math.sqrt(math.log(2 * c / e)):
            raise ValueError("dz violates the pi/sqrt(log(2c/eps)) cap")
        if dz > slack * self.delta / math.sqrt(2 * math.log(4 * c / e)):
            raise ValueError("dz violates the delta/sqrt(2 log(4c/eps)) cap")
        if (L - 1) * dz * slack < math.sqrt(2 * math.log(4 * c / e)):
            raise ValueError("(L-1)*dz violates the tail condition")
        if L * dz * slack < math.sqrt(12 * math.log(1 / e)):
            raise ValueError("L*dz violates the sqrt(12 log(1/eps)) condition")
        if (L * dz) ** 2 * slack < 4 * math.log(1 / e):
            raise ValueError("(L*dz)^2 violates the 4 log(1/eps) condition")


@dataclass(frozen=True)
class AlphaTable:
    """Gaussian LCU coefficients alpha_l for l = -L .. L-1 (index l + L)."""

    alphas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alphas", np.asarray(self.alphas, dtype=float))

    @property
    def L(self) -> int:
        return self.alphas.shape[0] // 2

    def alpha(self, l: int) -> float:
        return float(self.alphas[l + self.L])

    def total(self) -> float:
        return float(np.sum(self.alphas))


def select_params(epsilon: float, delta: float, c: float = DEFAULT_C) -> KernelParams:
    """Choose (dz, L, L*) for the requested precision and gap.

    dz starts at min(pi/sqrt(log(2c/eps)), delta/sqrt(2 log(4c/eps))); L is
    the smallest power of two meeting the tail conditions at that dz. dz is
    then shrunk so that L*dz sits exactly on the binding lower bound, which
    keeps L* a function of eps alone instead of inheriting up to a factor 2
    of power-of-two rounding slack through L.
    """
    if not 0 < epsilon <= 0.2:
        raise ValueError("epsilon must lie in (0, 1/5]")
    if not 0 < delta < math.pi:
        raise ValueError("delta must lie in (0, pi)")
    if c <= 1:
        raise ValueError("c must exceed 1")

    dz0 = min(
        math.pi / math.sqrt(math.log(2 * c / epsilon)),
        delta / math.sqrt(2 * math.log(4 * c / epsilon)),
    )
    need_tail = math.sqrt(2 * math.log(4 * c / epsilon))
    need_prep = max(
        math.sqrt(12 * math.log(1 / epsilon)),
        math.sqrt(4 * math.log(1 / epsilon)),
    )
    L = 1
    while not ((L - 1) * dz0 >= need_tail and L * dz0 >= need_prep):
        L <<= 1

    target = max(need_prep, need_tail * L / (L - 1))
    dz = min(dz0, target / L)

    lstar = 1 + math.ceil((L * dz / math.pi) * math.sqrt(math.log(c / epsilon)))
    lstar = max(1, min(lstar, L))
    m = int(math.log2(2 * L))
    return KernelParams(epsilon=epsilon, delta=delta, c=c, dz=dz, L=L,
                        Lstar=lstar, m=m)


def alpha_coeffs(params: KernelParams) -> AlphaTable:
    """alpha_l = (dz/sqrt(2 pi)) exp(-(l dz)^2 / 2) for -L <= l <= L-1."""
    ls = np.arange(-params.L, params.L)
    vals = (params.dz / math.sqrt(2 * math.pi)) * np.exp(-((ls * params.dz) ** 2) / 2)
    return AlphaTable(vals)


def kernel_value(lam, params: KernelParams):
    """(dz/sqrt(2 pi)) sum_l exp(-(l dz)^2/2) exp(i l lam), by direct summation.

    Accepts a scalar or an array of angles; this is the scalar oracle every
    operator-level check compares against.
    """
    ls = np.arange(-params.L, params.L)
    weights = (params.dz / math.sqrt(2 * math.pi)) * np.exp(-((ls * params.dz) ** 2) / 2)
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty(lam_arr.shape[0], dtype=np.complex128)
    # chunked so large-L parameter sets do not allocate a huge outer product
    step = max(1, (1 << 22) // (2 * params.L))
    for i in range(0, lam_arr.shape[0], step):
        chunk = lam_arr[i:i + step]
        out[i:i + step] = np.exp(1j * np.outer(chunk, ls)) @ weights
    if np.isscalar(lam) or np.asarray(lam).ndim == 0:
        return complex(out[0])
    return out


def kernel_sup_on_gap(params: KernelParams, points: int = 1000,
                      refine: int = 200) -> float:
    """sup of |kernel_value| over [delta, 2 pi - delta].

    Uses a uniform grid including endpoints plus one local refinement pass
    around the coarse maximum.
    """
    lo, hi = params.delta, 2 * math.pi - params.delta
    grid = np.linspace(lo, hi, points + 2)
    vals = np.abs(kernel_value(grid, params))
    best = int(np.argmax(vals))
    sup = float(vals[best])
    if refine > 0:
        h = (hi - lo) / (points + 1)
        flo = max(lo, grid[best] - h)
        fhi = min(hi, grid[best] + h)
        fine = np.linspace(flo, fhi, refine)
        sup = max(sup, float(np.abs(kernel_value(fine, params)).max()))
    return sup


def chernoff_tail(params: KernelParams) -> tuple[float, float]:
    """(directly summed |l| >= L tail, Chernoff bound 2 exp(-((L-1)dz)^2/2)).

    The direct sum runs to 8L terms, far past where the Gaussian underflows.
    """
    ls = np.arange(params.L, 8 * params.L)
    tail = 2 * (params.dz / math.sqrt(2 * math.pi)) * float(
        np.sum(np.exp(-((ls * params.dz) ** 2) / 2))
    )
    bound = 2 * math.exp(-(((params.L - 1) * params.dz) ** 2) / 2)
    return tail, bound


def poisson_check(lam: float, dz: float, K: int) -> tuple[float, complex]:
    """Both sides of the Gaussian Poisson-summation identity, truncated.

    lhs = sum_{|k|<=K} exp(-((lam + 2 pi k)/dz)^2 / 2)
    rhs = (dz/sqrt(2 pi)) sum_{|l|<=K/dz} exp(-(l dz)^2/2) exp(i l lam)
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    ks = np.arange(-K, K + 1)
    lhs = float(np.sum(np.exp(-(((lam + 2 * math.pi * ks) / dz) ** 2) / 2)))
    lmax = max(1, int(math.ceil(K / dz)))
    ls = np.arange(-lmax, lmax + 1)
    rhs = complex(
        (dz / math.sqrt(2 * math.pi))
        * np.sum(np.exp(-((ls * dz) ** 2) / 2) * np.exp(1j * ls * lam))
    )
    return lhs, rhs


def phi_amplitudes(params: KernelParams) -> np.ndarray:
    """Normalized source Gaussian over 2 L* basis states.

    Entry index j holds the amplitude for l = j - L*:
    exp(-(l pi / (L dz))^2) / sqrt(N), N = sum of squared weights.
    """
    ls = np.arange(-params.Lstar, params.Lstar)
    w = np.exp(-((ls * math.pi / (params.L * params.dz)) ** 2))
    norm = math.sqrt(float(np.sum(w * w)))
    return (w / norm).astype(np.complex128)


def psi_amplitudes(params: KernelParams) -> np.ndarray:
    """Target Gaussian over 2L basis states, entry j for l = j - L.

    Equals sqrt(alpha_l) entrywise; its squared norm is sum alpha_l, within
    eps of 1 but deliberately not renormalized.
    """
    ls = np.arange(-params.L, params.L)
    w = (params.dz / math.sqrt(2 * math.pi)) ** 0.5 * np.exp(
        -((ls * params.dz) ** 2) / 4
    )
    return w.astype(np.complex128)
