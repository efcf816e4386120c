"""Classical statistical models over finite outcome sets with matrix parameters.

A model holds outcome probabilities and the per-outcome score values along
each orthonormal tangent direction.  From it: the Fisher information operator
(with pseudoinverse and kernel metadata), Markov-kernel pushforwards,
monotonicity checks, locally unbiased estimators, and Monte Carlo variance
estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidOperandError,
    NoUnbiasedEstimatorError,
    SingularModelError,
)
from .operator_core import TangentBasis, mp_inverse, tangent_basis
from .quantum import Povm, QuantumState, _as_state_matrix

# Outcomes with probability at or below this floor are dropped, provided their
# effect is numerically zero; otherwise the model is flagged singular.
P_FLOOR = 1e-12


@dataclass(frozen=True)
class StatisticalModel:
    """Finite-outcome model: probabilities and scores per tangent direction.

    scores[x, a] is the logarithmic derivative l(x; e_a) along the a-th basis
    direction.  Every constructed model satisfies the zero-mean score identity
    sum_x p(x) l(x; e_a) = 0.
    """

    outcomes: tuple
    probs: np.ndarray
    scores: np.ndarray  # shape (n_outcomes, m)

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        scores = np.asarray(self.scores, dtype=float)
        if probs.ndim != 1 or scores.shape[0] != probs.size:
            raise InvalidOperandError("probs/scores shape mismatch")
        if len(self.outcomes) != probs.size:
            raise InvalidOperandError("outcomes length mismatch")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise InvalidOperandError(f"probabilities sum to {probs.sum()}")
        mean = probs @ scores
        if np.abs(mean).max() > 1e-9 * max(1.0, np.abs(scores).max()):
            raise InvalidOperandError("scores are not zero mean")
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "scores", scores)

    @property
    def n_outcomes(self) -> int:
        return self.probs.size

    @property
    def n_params(self) -> int:
        return self.scores.shape[1]


@dataclass(frozen=True)
class FisherOperator:
    """Real symmetric PSD Fisher information matrix with cached pseudoinverse."""

    matrix: np.ndarray
    pinv: np.ndarray
    rank: int
    kernel_basis: np.ndarray

    def quad(self, a: np.ndarray, b: np.ndarray | None = None) -> float:
        """(a, J^+ b) with the Euclidean pairing on coordinates."""
        b = a if b is None else b
        return float(np.real(np.asarray(a).conj() @ self.pinv @ np.asarray(b)))

    def kernel_violation(self, a: np.ndarray) -> float:
        """Norm of the component of a in the kernel of the operator."""
        if self.kernel_basis.shape[1] == 0:
            return 0.0
        return float(np.linalg.norm(self.kernel_basis.conj().T @ np.asarray(a)))

    def in_range(self, a: np.ndarray, rtol: float = 1e-8) -> bool:
        return self.kernel_violation(a) <= rtol * max(np.linalg.norm(a), 1e-300)


def _fisher_from_matrix(j: np.ndarray) -> FisherOperator:
    j = np.asarray(j)
    sym = (j + j.conj().T) / 2
    norm = np.linalg.norm(sym)
    if np.linalg.eigvalsh(sym).min() < -1e-9 * max(norm, 1.0):
        raise InvalidOperandError("Fisher matrix is not PSD")
    res = mp_inverse(sym)
    return FisherOperator(
        matrix=sym, pinv=res.pinv, rank=res.rank, kernel_basis=res.kernel_basis
    )


@dataclass(frozen=True)
class StochasticKernel:
    """Column-stochastic matrix mapping old outcomes to new outcomes."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise InvalidOperandError("kernel must be a matrix")
        if m.min() < 0:
            raise InvalidOperandError("kernel entries must be nonnegative")
        if np.abs(m.sum(axis=0) - 1.0).max() > 1e-12:
            raise InvalidOperandError("kernel columns must sum to 1")
        object.__setattr__(self, "matrix", m)


def model_from_povm(
    s: QuantumState | np.ndarray, m: Povm, basis: TangentBasis | None = None
) -> StatisticalModel:
    """The classical model of measuring a POVM on the affine state family.

    p(x) = Tr[rho effect(x)] and l(x; e_a) = Tr[e_a effect(x)] / p(x).
    Outcomes with negligible probability are dropped only when their effect is
    itself negligible; otherwise the model is singular (the state is not
    strictly positive or the POVM is inconsistent).
    """
    rho = _as_state_matrix(s)
    d = rho.shape[0]
    if m.dim != d:
        raise InvalidOperandError("state and POVM dimension mismatch")
    if basis is None:
        basis = tangent_basis(d)
    effects = np.array(m.effects)
    probs = np.einsum("ij,xji->x", rho, effects).real
    numer = np.einsum("aij,xji->xa", basis.elements, effects).real
    keep = probs > P_FLOOR
    for x in np.nonzero(~keep)[0]:
        if np.linalg.norm(m.effects[x]) > 1e-10:
            raise SingularModelError(
                f"outcome {m.outcomes[x]!r} has probability {probs[x]:.3e} "
                "but a non-negligible effect"
            )
    probs_kept = probs[keep]
    scores = numer[keep] / probs_kept[:, None]
    outcomes = tuple(o for o, k in zip(m.outcomes, keep) if k)
    return StatisticalModel(
        outcomes=outcomes, probs=probs_kept / probs_kept.sum(), scores=scores
    )


def fisher_operator(mod: StatisticalModel) -> FisherOperator:
    """J_ab = sum_x p(x) l(x; e_a) l(x; e_b)."""
    j = (mod.scores * mod.probs[:, None]).T @ mod.scores
    return _fisher_from_matrix(j)


def markov_pushforward(mod: StatisticalModel, k: StochasticKernel) -> StatisticalModel:
    """Push the model through a Markov kernel.

    probs' = K p; scores push by conditional expectation,
    l'(y; e_a) = sum_x K(y|x) p(x) l(x; e_a) / p'(y).
    """
    km = k.matrix
    if km.shape[1] != mod.n_outcomes:
        raise InvalidOperandError(
            f"kernel expects {km.shape[1]} outcomes, model has {mod.n_outcomes}"
        )
    probs = km @ mod.probs
    numer = km @ (mod.probs[:, None] * mod.scores)
    keep = probs > P_FLOOR
    scores = numer[keep] / probs[keep][:, None]
    outcomes = tuple(y for y in range(km.shape[0]) if keep[y])
    return StatisticalModel(
        outcomes=outcomes, probs=probs[keep] / probs[keep].sum(), scores=scores
    )


@dataclass(frozen=True)
class MonotonicityReport:
    diff_min_eig: float
    holds: bool


def monotonicity_check(mod: StatisticalModel, k: StochasticKernel) -> MonotonicityReport:
    """Check J >= J' for the pushforward through a Markov kernel."""
    j = fisher_operator(mod).matrix
    jp = fisher_operator(markov_pushforward(mod, k)).matrix
    diff_min = float(np.linalg.eigvalsh(j - jp).min())
    return MonotonicityReport(
        diff_min_eig=diff_min,
        holds=diff_min >= -1e-9 * max(np.linalg.norm(j), 1.0),
    )


@dataclass(frozen=True)
class Estimator:
    """Locally unbiased estimator: one real value per model outcome."""

    values: np.ndarray
    variance: float


def locally_unbiased_estimator(
    mod: StatisticalModel, a: np.ndarray, target_value: float
) -> Estimator:
    """The score-based locally unbiased estimator for the direction a.

    f(x) = target_value + kappa(x) . J^+ a; its mean is target_value, its mean
    gradient is a, and its variance attains the Cramer-Rao bound (a, J^+ a).
    Raises when a has a kernel component: no unbiased estimator exists.
    """
    a = np.asarray(a, dtype=float)
    j = fisher_operator(mod)
    if not j.in_range(a):
        raise NoUnbiasedEstimatorError(
            f"direction has kernel component {j.kernel_violation(a):.3e}"
        )
    weights = j.pinv @ a
    values = target_value + mod.scores @ weights
    return Estimator(values=values, variance=j.quad(a))


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    var: float
    stderr: float


def monte_carlo_variance(
    mod: StatisticalModel, values: np.ndarray, n: int, seed: int
) -> MonteCarloResult:
    """Sample mean/variance of a per-outcome estimator over n i.i.d. draws.

    stderr is the normal-theory variance-of-variance approximation
    sqrt(2 / (n - 1)) * var.
    """
    if n < 1000:
        raise InvalidOperandError("need at least 1000 samples")
    values = np.asarray(values, dtype=float)
    rng = np.random.Generator(np.random.Philox(seed))
    idx = rng.choice(mod.n_outcomes, size=n, p=mod.probs)
    draws = values[idx]
    var = float(np.var(draws, ddof=1))
    return MonteCarloResult(
        mean=float(draws.mean()), var=var, stderr=float(np.sqrt(2.0 / (n - 1)) * var)
    )
