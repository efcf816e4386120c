"""Truncated Fock-space building blocks for the oscillator scenario."""

from __future__ import annotations

import numpy as np

from .errors import InvalidDimensionError, InvalidOperandError
from .quantum import KrausChannel, Povm, QuantumState, pvm_of_observable


def annihilation(dim: int) -> np.ndarray:
    if dim < 2:
        raise InvalidDimensionError("need at least two Fock levels")
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def quadrature_q(dim: int) -> np.ndarray:
    """q = (a + a^dagger) / sqrt(2) on the truncated space."""
    a = annihilation(dim)
    return (a + a.conj().T) / np.sqrt(2)


def quadrature_p(dim: int) -> np.ndarray:
    """p = (a - a^dagger) / (i sqrt(2)) on the truncated space."""
    a = annihilation(dim)
    return (a - a.conj().T) / (1j * np.sqrt(2))


def thermal_state(dim: int, mean_photon: float) -> QuantumState:
    """Truncated thermal state, renormalized so it stays full rank."""
    if mean_photon <= 0:
        raise InvalidOperandError("mean photon number must be positive")
    n = np.arange(dim)
    lam = (mean_photon / (mean_photon + 1)) ** n / (mean_photon + 1)
    lam = lam / lam.sum()
    return QuantumState(base=np.diag(lam).astype(complex))


def homodyne_q_pvm(dim: int) -> Povm:
    """PVM of the truncated q quadrature (its eigenvalues are all simple)."""
    return pvm_of_observable(quadrature_q(dim))


def number_dephasing_channel(dim: int, strength: float) -> KrausChannel:
    """Partial dephasing in the Fock basis: X -> (1-s) X + s diag(X).

    Kraus operators are sqrt(1-s) I together with sqrt(s) |n><n| for each
    level; strength 1 is full dephasing, 0 is the identity.
    """
    if not 0.0 <= strength <= 1.0:
        raise InvalidOperandError("dephasing strength must be in [0, 1]")
    kraus = [np.sqrt(1.0 - strength) * np.eye(dim, dtype=complex)]
    for n in range(dim):
        k = np.zeros((dim, dim), dtype=complex)
        k[n, n] = np.sqrt(strength)
        kraus.append(k)
    return KrausChannel(kraus=tuple(kraus))
