"""Measured quantities: Sz profile, half-chain entanglement, overlaps, energy."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgumentError, NumericalConsistencyError
from .hilbert import StateVector

CLIP_NEGATIVE = 1e-12
FAIL_NEGATIVE = 1e-9
RDM_MAX_DIM = 4096


def _require_normalized(psi: StateVector, tol: float = 1e-6) -> None:
    n = psi.norm()
    if abs(n - 1.0) > tol:
        raise InvalidArgumentError(f"state must be normalized (norm = {n:.6g})")


def sz_profile_array(psi: StateVector) -> np.ndarray:
    """``<Sz_n>`` for every site; no normalization check."""
    prob = np.abs(psi.amplitudes) ** 2
    return psi.basis.two_m_table @ prob * 0.5


def sz_profile(psi: StateVector) -> np.ndarray:
    _require_normalized(psi)
    return sz_profile_array(psi)


def reduced_density_half(psi: StateVector) -> np.ndarray:
    """State of sites ``L/2+1 .. L`` after tracing out sites ``1 .. L/2``.

    Sites 1..L/2 are the low-order digits of the encoding, so a C-order
    reshape gives ``M[kept, traced]`` and ``rho = M M^dagger``.
    """
    basis = psi.basis
    L = basis.num_sites
    if L % 2:
        raise InvalidArgumentError(f"half-chain reduction needs even L, got {L}")
    half_dim = basis.local_dim ** (L // 2)
    if half_dim > RDM_MAX_DIM:
        raise InvalidArgumentError(f"kept half has dimension {half_dim} > {RDM_MAX_DIM}")
    m = psi.amplitudes.reshape(half_dim, half_dim)
    return m @ m.conj().T


def reduced_density_first_half(psi: StateVector) -> np.ndarray:
    """Complementary reduction: keep sites ``1 .. L/2``."""
    basis = psi.basis
    half_dim = basis.local_dim ** (basis.num_sites // 2)
    m = psi.amplitudes.reshape(half_dim, half_dim)
    return m.T @ m.conj()


def von_neumann_entropy(rho: np.ndarray) -> float:
    """``-Tr rho ln rho`` with tiny negative eigenvalues clipped to zero."""
    lam = np.linalg.eigvalsh(rho)
    if lam.min() < -FAIL_NEGATIVE:
        raise NumericalConsistencyError(f"density matrix has eigenvalue {lam.min():.3g}")
    lam = np.clip(lam, 0.0, 1.0)
    lam = lam[lam > 0.0]
    # + 0.0 turns the empty-sum -0.0 into 0.0
    return float(-(lam * np.log(lam)).sum()) + 0.0


def entanglement_entropy_per_site(psi: StateVector) -> float:
    """Half-chain von Neumann entropy (natural log) divided by ``L``."""
    return von_neumann_entropy(reduced_density_half(psi)) / psi.basis.num_sites


def page_entropy_per_site(num_sites: int, local_dim: int = 2) -> float:
    """Leading-order Page value ``ln m - m / (2n)`` for equal halves, per site."""
    m = local_dim ** (num_sites // 2)
    return (math.log(m) - 0.5) / num_sites


def overlap(psi: StateVector, phi: StateVector) -> complex:
    """``<phi|psi>``."""
    if psi.basis != phi.basis:
        raise InvalidArgumentError("states live on different bases")
    return complex(np.vdot(phi.amplitudes, psi.amplitudes))


def energy(handle, psi: StateVector) -> tuple[float, float]:
    """``(Re <psi|H|psi>, Im <psi|H|psi>)``; the imaginary part is a diagnostic."""
    value = np.vdot(psi.amplitudes, handle.apply(psi).amplitudes)
    return float(value.real), float(value.imag)
