"""Interlacing pairs, atomic measures, continual diagrams, and the finite
Markov transform in both directions.

The forward transform sends a strictly interlacing pair (a, b) to the
probability measure with atoms ``a`` and partial-fraction weights; the
inverse recovers ``b`` as the roots of the weighted Cauchy transform in the
gaps of ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

WEIGHT_SUM_GATE = 1e-9
DEGENERATE_GAP = 1e-12


class InterlacingError(ValueError):
    """Input sequences do not strictly interlace."""


class WeightSumError(ValueError):
    """Partial-fraction weights lost normalization beyond the 1e-9 gate.

    Signals catastrophic cancellation; reduce n or increase separation.
    """


class DegenerateAtomsError(ValueError):
    """Atoms are clustered below 1e-12 of the span; refusing to perturb."""


@dataclass(frozen=True)
class AtomicMeasure:
    """Atoms with positive weights summing to one."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.ndim != 1 or atoms.shape != weights.shape or atoms.size < 1:
            raise ValueError("atoms and weights must be matching 1-d arrays")
        if not np.all(np.diff(atoms) > 0):
            raise ValueError("atoms must be strictly increasing")
        if not np.all(weights > 0):
            raise ValueError("weights must be strictly positive")
        total = float(weights.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def delta(cls, c: float) -> "AtomicMeasure":
        return cls(np.array([float(c)]), np.array([1.0]))

    @property
    def n(self) -> int:
        return self.atoms.size

    def moment(self, k: int) -> float:
        return float(np.dot(self.weights, self.atoms ** k))


@dataclass(frozen=True)
class InterlacingPair:
    """Strictly interlacing sequences a (length n) and b (length n-1)."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.ndim != 1 or b.ndim != 1 or a.size < 1 or b.size != a.size - 1:
            raise InterlacingError("need len(b) == len(a) - 1 >= 0")
        merged = np.empty(a.size + b.size)
        merged[0::2] = a
        merged[1::2] = b
        bad = np.nonzero(np.diff(merged) <= 0)[0]
        if bad.size:
            raise InterlacingError(
                f"interlacing violated at merged index {int(bad[0]) + 1}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.size


@dataclass(frozen=True)
class Diagram:
    """Continual diagram of an interlacing pair; 1-Lipschitz, |x - center| far out."""

    pair: InterlacingPair
    center: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "center", float(self.pair.a.sum() - self.pair.b.sum())
        )

    def eval(self, x):
        return diagram_eval(self, x)


def verify_interlacing(a, b) -> InterlacingPair:
    """Sort both sequences and validate strict interlacing."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    return InterlacingPair(a, b)


def markov_forward(pair: InterlacingPair) -> AtomicMeasure:
    """Partial-fraction weights of prod(z - b) / prod(z - a) at the poles a.

    Computed in log space (signs are fixed by interlacing) so the product
    formula survives n in the thousands.
    """
    a, b = pair.a, pair.b
    n = a.size
    if n == 1:
        return AtomicMeasure(a.copy(), np.array([1.0]))
    # log p_j = sum_i log|a_j - b_i| - sum_{i != j} log|a_j - a_i|
    log_num = np.log(np.abs(a[:, None] - b[None, :])).sum(axis=1)
    diff_aa = np.abs(a[:, None] - a[None, :])
    np.fill_diagonal(diff_aa, 1.0)
    log_den = np.log(diff_aa).sum(axis=1)
    weights = np.exp(log_num - log_den)
    total = float(weights.sum())
    if abs(total - 1.0) > WEIGHT_SUM_GATE:
        raise WeightSumError(
            f"weight sum {total!r} deviates from 1 beyond {WEIGHT_SUM_GATE}"
        )
    return AtomicMeasure(a.copy(), weights / total)


def _check_gaps(atoms: np.ndarray) -> None:
    if atoms.size < 2:
        return
    span = float(atoms[-1] - atoms[0])
    if np.min(np.diff(atoms)) < DEGENERATE_GAP * span:
        raise DegenerateAtomsError(
            "atom gap below 1e-12 of the span; refusing to perturb"
        )


def markov_inverse(measure: AtomicMeasure) -> InterlacingPair:
    """Roots of sum_j p_j / (z - a_j) = 0, one per gap of the atoms.

    The transform is strictly decreasing between consecutive poles, so
    bisection brackets each root; a few Newton steps polish it.
    """
    a, p = measure.atoms, measure.weights
    n = a.size
    if n == 1:
        return InterlacingPair(a.copy(), np.empty(0))
    _check_gaps(a)

    lo = a[:-1].copy()
    hi = a[1:].copy()
    gaps = hi - lo

    def f_and_fprime(z):
        d = z[None, :] - a[:, None]
        inv = p[:, None] / d
        return inv.sum(axis=0), -(inv / d).sum(axis=0)

    # Bisect on f(z) = sum p/(z-a): +inf at lo+, -inf at hi-.
    left = lo + 1e-14 * gaps
    right = hi - 1e-14 * gaps
    for _ in range(60):
        mid = 0.5 * (left + right)
        val, _ = f_and_fprime(mid)
        pos = val > 0
        left = np.where(pos, mid, left)
        right = np.where(pos, right, mid)
        if np.max(right - left) <= 1e-13 * np.min(gaps):
            break
    roots = 0.5 * (left + right)
    for _ in range(3):
        val, der = f_and_fprime(roots)
        step = np.where(der != 0, val / der, 0.0)
        candidate = roots - step
        ok = (candidate > lo) & (candidate < hi)
        roots = np.where(ok, candidate, roots)
    return InterlacingPair(a.copy(), roots)


def diagram_eval(d: Diagram, x):
    """``sum |x - a_j| - sum |x - b_j|``, vectorized over x."""
    x = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x)
    out = (
        np.abs(xs[:, None] - d.pair.a[None, :]).sum(axis=1)
        - np.abs(xs[:, None] - d.pair.b[None, :]).sum(axis=1)
    )
    return out if x.ndim else float(out[0])


def rescale_measure(measure: AtomicMeasure, scale: float) -> AtomicMeasure:
    """Pushforward under x -> x / L (weights preserved)."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    return AtomicMeasure(measure.atoms / scale, measure.weights.copy())


def rescale_diagram(d: Diagram, scale: float) -> Diagram:
    """Diagram rescaling: (R_L omega)(x) = omega(L x) / L."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    return Diagram(InterlacingPair(d.pair.a / scale, d.pair.b / scale))


def diagram_sup_distance(d: Diagram, reference, grid) -> float:
    """Max over the grid of |diagram - reference|."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    ref = np.asarray(reference(grid), dtype=float)
    return float(np.max(np.abs(d.eval(grid) - ref)))


def total_variation(mu: AtomicMeasure, nu: AtomicMeasure,
                    atol: float = 1e-8) -> float:
    """TV distance of two atomic measures sharing (numerically) the same atoms."""
    if mu.n != nu.n or not np.allclose(mu.atoms, nu.atoms, atol=atol, rtol=0):
        raise ValueError("measures must share their atoms")
    return 0.5 * float(np.abs(mu.weights - nu.weights).sum())
