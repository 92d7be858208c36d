"""Dense Hermitian ensembles (GUE and uniform-unimodular), their
eigenvalues, submatrix spectra, critical points, and the two continual
diagrams built from them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .interlacing import AtomicMeasure, Diagram, InterlacingPair, markov_forward
from .jacobi import counting_measure, critical_points
from .seeds import STREAM_GUE, STREAM_UNIMODULAR, rng_for


class EnsembleKind(enum.Enum):
    GUE = "gue"
    UNIMODULAR = "unimodular"


@dataclass(frozen=True)
class EnsembleSpec:
    kind: EnsembleKind
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")


@dataclass(frozen=True)
class HermitianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if not np.allclose(m, m.conj().T, atol=1e-12, rtol=0):
            raise ValueError("matrix must be Hermitian")
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def submatrix(self) -> "HermitianMatrix":
        if self.n < 2:
            raise ValueError("no proper principal submatrix for n = 1")
        return HermitianMatrix(self.entries[:-1, :-1])


def sample(spec: EnsembleSpec, seed: int) -> HermitianMatrix:
    """Draw a matrix from the ensemble, deterministically in (spec, seed).

    GUE: real N(0,1) diagonal, off-diagonal with independent N(0, 1/2)
    real and imaginary parts (E|H(i,j)|^2 = 1).  Unimodular: zero
    diagonal, off-diagonal uniform on the unit circle.
    """
    n = spec.n
    if spec.kind is EnsembleKind.GUE:
        rng = rng_for(seed, STREAM_GUE)
        real = rng.normal(0.0, np.sqrt(0.5), size=(n, n))
        imag = rng.normal(0.0, np.sqrt(0.5), size=(n, n))
        upper = np.triu(real + 1j * imag, 1)
        diag = rng.normal(0.0, 1.0, size=n)
        m = upper + upper.conj().T + np.diag(diag.astype(complex))
    else:
        rng = rng_for(seed, STREAM_UNIMODULAR)
        theta = rng.uniform(0.0, 2.0 * np.pi, size=(n, n))
        upper = np.triu(np.exp(1j * theta), 1)
        m = upper + upper.conj().T
    return HermitianMatrix(m)


def is_unimodular_class(h: HermitianMatrix, tol: float = 1e-12) -> bool:
    """Zero diagonal and |H(i,j)| = 1 off the diagonal."""
    m = h.entries
    if np.any(np.abs(np.diag(m)) > tol):
        return False
    off = np.abs(m) - 1.0
    np.fill_diagonal(off, 0.0)
    return bool(np.all(np.abs(off) <= tol))


def hermitian_eigenvalues(h: HermitianMatrix) -> np.ndarray:
    """All eigenvalues, sorted ascending."""
    return np.linalg.eigvalsh(h.entries)


def spectral_measure_dense(h: HermitianMatrix) -> AtomicMeasure:
    """Markov transform of (eigenvalues, submatrix eigenvalues).

    The k-th moment equals the (n, n) entry of H^k.
    """
    if h.n < 2:
        raise ValueError("need n >= 2")
    pair = InterlacingPair(
        hermitian_eigenvalues(h), hermitian_eigenvalues(h.submatrix())
    )
    return markov_forward(pair)


def build_diagrams(h: HermitianMatrix) -> tuple[Diagram, Diagram]:
    """The diagrams from (eigs, submatrix eigs) and (eigs, critical points)."""
    if h.n < 2:
        raise ValueError("need n >= 2")
    eigs = hermitian_eigenvalues(h)
    omega = Diagram(InterlacingPair(eigs, hermitian_eigenvalues(h.submatrix())))
    varpi = Diagram(InterlacingPair(eigs, critical_points(eigs)))
    return omega, varpi


__all__ = [
    "EnsembleKind",
    "EnsembleSpec",
    "HermitianMatrix",
    "sample",
    "is_unimodular_class",
    "hermitian_eigenvalues",
    "spectral_measure_dense",
    "build_diagrams",
    "counting_measure",
    "critical_points",
]
