"""Tridiagonal (Jacobi) matrices: eigenvalues, spectral and counting
measures, the tridiagonal beta-ensemble sampler, and the finite trace
formula relating diagrams to both measures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from .interlacing import (
    AtomicMeasure,
    InterlacingPair,
    markov_forward,
    markov_inverse,
    total_variation,
)
from .seeds import STREAM_DE, rng_for


@dataclass(frozen=True)
class JacobiMatrix:
    """Symmetric tridiagonal matrix with strictly positive off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or diag.size < 1 or offdiag.shape != (diag.size - 1,):
            raise ValueError("need len(offdiag) == len(diag) - 1 >= 0")
        if offdiag.size and not np.all(offdiag > 0):
            raise ValueError("off-diagonal entries must be strictly positive")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def n(self) -> int:
        return self.diag.size

    def submatrix(self) -> "JacobiMatrix":
        """Top-left (n-1) x (n-1) principal submatrix."""
        if self.n < 2:
            raise ValueError("no proper principal submatrix for n = 1")
        return JacobiMatrix(self.diag[:-1], self.offdiag[:-1])

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.offdiag.size:
            m += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return m


def tridiag_eigenvalues(j: JacobiMatrix) -> np.ndarray:
    """All eigenvalues of J, sorted ascending."""
    if j.n == 1:
        return j.diag.copy()
    return eigvalsh_tridiagonal(j.diag, j.offdiag)


def spectral_pair(j: JacobiMatrix) -> InterlacingPair:
    """Eigenvalues of J and of its principal submatrix, as an interlacing pair."""
    return InterlacingPair(
        tridiag_eigenvalues(j), tridiag_eigenvalues(j.submatrix())
    )


def spectral_measure(j: JacobiMatrix) -> AtomicMeasure:
    """Spectral measure of J at the last coordinate vector.

    Implemented through the Markov transform of (eigs, submatrix eigs);
    the weights coincide with the squared last eigenvector coordinates.
    """
    if j.n == 1:
        return AtomicMeasure.delta(float(j.diag[0]))
    return markov_forward(spectral_pair(j))


def spectral_measure_eigvec(j: JacobiMatrix) -> AtomicMeasure:
    """Spectral measure via squared last eigenvector coordinates.

    Independent route kept for cross-checking the Markov-transform path.
    """
    if j.n == 1:
        return AtomicMeasure.delta(float(j.diag[0]))
    eigs, vecs = eigh_tridiagonal(j.diag, j.offdiag)
    weights = vecs[-1, :] ** 2
    return AtomicMeasure(eigs, weights / weights.sum())


def counting_measure(eigs: np.ndarray) -> AtomicMeasure:
    """Normalized counting measure, equal weights 1/n; duplicates rejected."""
    eigs = np.sort(np.asarray(eigs, dtype=float))
    if eigs.size > 1 and np.min(np.diff(eigs)) <= 0:
        raise ValueError("eigenvalues must be distinct")
    return AtomicMeasure(eigs, np.full(eigs.size, 1.0 / eigs.size))


def critical_points(eigs: np.ndarray) -> np.ndarray:
    """Roots of sum_j 1/(x - lambda_j), one in each gap of the eigenvalues.

    These are the critical points of the characteristic polynomial.
    """
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size < 2:
        raise ValueError("need at least two eigenvalues")
    return markov_inverse(counting_measure(eigs)).b


def de_sample(n: int, beta: float, seed: int) -> JacobiMatrix:
    """Tridiagonal beta-ensemble matrix (Dumitriu--Edelman).

    Diagonal entries are N(0, 2/beta); the off-diagonal entry at position i
    is chi_{i beta} / sqrt(beta), so E b_i^2 = i.  At beta = 2 the joint
    eigenvalue/submatrix law matches the GUE.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if beta <= 0:
        raise ValueError("beta must be positive")
    rng = rng_for(seed, STREAM_DE)
    diag = rng.normal(0.0, np.sqrt(2.0 / beta), size=n)
    dof = beta * np.arange(1, n, dtype=float)
    offdiag = np.sqrt(rng.chisquare(dof) / beta) if n > 1 else np.empty(0)
    return JacobiMatrix(diag, offdiag)


def trace_formula_check(j: JacobiMatrix) -> tuple[float, float]:
    """Residuals of the finite trace-formula identities.

    The mu side compares the Markov-transform weights with the squared
    last eigenvector coordinates; the rho side compares the forward
    transform of (eigenvalues, critical points) with the uniform counting
    measure.  Both are total-variation distances.
    """
    if j.n < 2:
        raise ValueError("need n >= 2")
    mu_markov = spectral_measure(j)
    mu_eigvec = spectral_measure_eigvec(j)
    residual_mu = total_variation(mu_markov, mu_eigvec)

    eigs = tridiag_eigenvalues(j)
    rho = counting_measure(eigs)
    varpi_pair = InterlacingPair(eigs, critical_points(eigs))
    residual_rho = total_variation(markov_forward(varpi_pair), rho)
    return residual_mu, residual_rho
