"""Quantum Fisher information: logarithmic derivatives, operators, and checks.

All superoperator solves go through the eigenbasis coefficient formula
c_f(l_i, l_j) = l_j f(l_i / l_j), which is exact for strictly positive states.
SLD Fisher operators are real symmetric on tangent coordinates; RLD and other
complex-valued forms live on the complexified coordinates with a Hermitian
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import FisherOperator, fisher_operator, model_from_povm
from .errors import InvalidOperandError
from .operator_core import (
    MonotoneFunction,
    RLD_FUNCTION,
    SLD_FUNCTION,
    TangentBasis,
    hs_inner,
    kf_superoperator,
    mp_inverse,
    tangent_basis,
)
from .quantum import (
    KrausChannel,
    Povm,
    QuantumState,
    _as_state_matrix,
    pvm_of_observable,
)


@dataclass(frozen=True)
class LogDerivative:
    """Solution L of K^f_rho(L) = phi for a tangent direction phi."""

    direction: np.ndarray
    kind: str
    matrix: np.ndarray


def log_derivative(
    s: QuantumState | np.ndarray, phi: np.ndarray, f: MonotoneFunction = SLD_FUNCTION
) -> LogDerivative:
    """The f-logarithmic derivative in the direction phi.

    For the SLD function this solves (rho L + L rho) / 2 = phi and is
    Hermitian; for the RLD function it equals rho^{-1} phi.
    """
    rho = _as_state_matrix(s)
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != rho.shape:
        raise InvalidOperandError("direction dimension mismatch")
    k = kf_superoperator(rho, f)
    return LogDerivative(direction=phi, kind=f.name, matrix=k.apply_inverse(phi))


@dataclass(frozen=True)
class QuantumFisherOperator:
    """f-Fisher information matrix on tangent coordinates.

    Real symmetric for the SLD function; complex Hermitian (on the
    complexified coordinates) otherwise.  quad() evaluates the pseudoinverse
    pairing (a, J^+ b), which is real for real coordinate vectors.
    """

    kind: str
    matrix: np.ndarray
    pinv: np.ndarray
    rank: int
    kernel_basis: np.ndarray

    def quad(self, a: np.ndarray, b: np.ndarray | None = None) -> float:
        b = a if b is None else b
        val = complex(np.asarray(a).conj() @ self.pinv @ np.asarray(b))
        return val.real

    def kernel_violation(self, a: np.ndarray) -> float:
        if self.kernel_basis.shape[1] == 0:
            return 0.0
        return float(np.linalg.norm(self.kernel_basis.conj().T @ np.asarray(a)))

    def in_range(self, a: np.ndarray, rtol: float = 1e-8) -> bool:
        return self.kernel_violation(a) <= rtol * max(np.linalg.norm(a), 1e-300)


def _gram_fisher(
    images: np.ndarray, sigma: np.ndarray, f: MonotoneFunction
) -> np.ndarray:
    """Matrix of Tr[X_a (K^f_sigma)^{-1} X_b] for a stack of Hermitian images."""
    k = kf_superoperator(sigma, f)
    u = k.state_eigenvectors
    m, d = images.shape[0], images.shape[1]
    xt = np.einsum("pi,apq,qj->aij", u.conj(), images, u)
    lt = xt / k.coefficients
    flat_x = xt.reshape(m, d * d)
    flat_l = lt.reshape(m, d * d)
    return flat_x.conj() @ flat_l.T


def quantum_fisher(
    s: QuantumState | np.ndarray,
    f: MonotoneFunction = SLD_FUNCTION,
    pushforward: KrausChannel | None = None,
    basis: TangentBasis | None = None,
) -> QuantumFisherOperator:
    """f-Fisher information operator of the affine family (optionally pushed).

    Without a pushforward the entries are Tr[e_a L^f(e_b)] at the given state.
    With a channel E the model becomes theta -> E(rho0 + theta), so both the
    state and the basis directions are pushed through E before the solve.
    """
    rho = _as_state_matrix(s)
    d = rho.shape[0]
    if basis is None:
        basis = tangent_basis(d)
    images = basis.elements
    sigma = rho
    if pushforward is not None:
        if pushforward.dim_in != d:
            raise InvalidOperandError("channel input dimension mismatch")
        sigma = pushforward(rho)
        images = np.array([pushforward(e) for e in basis.elements])
    j = _gram_fisher(images, sigma, f)
    if f.name == SLD_FUNCTION.name:
        j = (j.real + j.real.T) / 2
    else:
        j = (j + j.conj().T) / 2
    norm = max(np.linalg.norm(j), 1.0)
    if np.linalg.eigvalsh(j).min() < -1e-9 * norm:
        raise InvalidOperandError("quantum Fisher matrix is not PSD")
    res = mp_inverse(j)
    return QuantumFisherOperator(
        kind=f.name, matrix=j, pinv=res.pinv, rank=res.rank, kernel_basis=res.kernel_basis
    )


@dataclass(frozen=True)
class CramerRaoReport:
    sld_gap_min_eig: float
    rld_gap_min_eig: float
    holds: bool


def quantum_cr_check(
    s: QuantumState | np.ndarray, m: Povm, basis: TangentBasis | None = None
) -> CramerRaoReport:
    """Check J^M <= J^S and J^M <= J^R for a POVM on a full-rank state.

    The RLD gap is evaluated as a Hermitian form on the complexified
    coordinates, with the (real) classical Fisher matrix embedded.
    """
    rho = _as_state_matrix(s)
    if basis is None:
        basis = tangent_basis(rho.shape[0])
    jm = fisher_operator(model_from_povm(rho, m, basis)).matrix
    js = quantum_fisher(rho, SLD_FUNCTION, basis=basis).matrix
    jr = quantum_fisher(rho, RLD_FUNCTION, basis=basis).matrix
    sld_gap = float(np.linalg.eigvalsh(js - jm).min())
    rld_gap = float(np.linalg.eigvalsh(jr - jm.astype(complex)).min())
    holds = sld_gap >= -1e-8 * max(np.linalg.norm(js), 1.0) and rld_gap >= -1e-8 * max(
        np.linalg.norm(jr), 1.0
    )
    return CramerRaoReport(sld_gap_min_eig=sld_gap, rld_gap_min_eig=rld_gap, holds=holds)


def sld_optimal_pvm(s: QuantumState | np.ndarray, phi: np.ndarray) -> Povm:
    """The PVM in the eigenbasis of the SLD, which attains (phi, J^S phi).

    Measuring it gives a classical Fisher quadratic form along phi equal to
    the SLD quantum Fisher form.
    """
    l = log_derivative(s, phi, SLD_FUNCTION)
    return pvm_of_observable(l.matrix)


def monotone_metric_value(
    s: QuantumState | np.ndarray,
    f: MonotoneFunction,
    v: np.ndarray,
    w: np.ndarray,
) -> complex:
    """G^f_rho(V, W) = Tr[V^dagger (K^f_rho)^{-1} W]."""
    rho = _as_state_matrix(s)
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if v.shape != rho.shape or w.shape != rho.shape:
        raise InvalidOperandError("tangent dimension mismatch")
    k = kf_superoperator(rho, f)
    return hs_inner(v, k.apply_inverse(w))
