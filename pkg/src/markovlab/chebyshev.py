"""Chebyshev polynomials, reference measures on [-2, 2], and quadrature rules.

Conventions used throughout the package:

* Chebyshev polynomials are always evaluated at half the atom position,
  i.e. every moment of a measure with atoms ``x_j`` is a sum of
  ``T_k(x_j / 2)`` or ``U_k(x_j / 2)`` terms.
* The semicircle density is ``sqrt(4 - x^2) / (2 pi)`` on [-2, 2]; the
  arcsine density is ``1 / (pi sqrt(4 - x^2))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class ChebKind(enum.Enum):
    FIRST = "first"
    SECOND = "second"


class ReferenceMeasure(enum.Enum):
    SEMICIRCLE = "semicircle"
    ARCSINE = "arcsine"

    def density(self, x):
        """Density with respect to Lebesgue measure, zero outside (-2, 2)."""
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < 2.0
        out = np.zeros_like(x)
        if self is ReferenceMeasure.SEMICIRCLE:
            out[inside] = np.sqrt(4.0 - x[inside] ** 2) / (2.0 * np.pi)
        else:
            out[inside] = 1.0 / (np.pi * np.sqrt(4.0 - x[inside] ** 2))
        return out

    def exact_moment(self, k: int) -> float:
        """Power moment ``int x^k`` of the reference measure.

        Semicircle moments are Catalan numbers, arcsine moments are
        central binomial coefficients (odd moments vanish).
        """
        if k % 2 == 1:
            return 0.0
        m = k // 2
        if self is ReferenceMeasure.SEMICIRCLE:
            return math.comb(2 * m, m) // (m + 1)
        return math.comb(2 * m, m)


@dataclass(frozen=True)
class ChebCoeffs:
    """Chebyshev moment vector, entry ``k`` for ``k = 0..k_max``."""

    kind: ChebKind
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("coefficient array must be 1-d and nonempty")
        if not np.all(np.isfinite(values)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "values", values)

    @property
    def k_max(self) -> int:
        return self.values.size - 1


def cheb_eval(kind: ChebKind, k: int, x):
    """Evaluate ``T_k(x)`` or ``U_k(x)`` by the three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = x if kind is ChebKind.FIRST else 2.0 * x
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur if cur.ndim else float(cur)


def cheb_table(kind: ChebKind, k_max: int, x: np.ndarray) -> np.ndarray:
    """All of ``P_0(x) .. P_kmax(x)`` as rows, sharing one recurrence pass."""
    x = np.asarray(x, dtype=float)
    out = np.empty((k_max + 1,) + x.shape)
    out[0] = 1.0
    if k_max >= 1:
        out[1] = x if kind is ChebKind.FIRST else 2.0 * x
    for k in range(2, k_max + 1):
        out[k] = 2.0 * x * out[k - 1] - out[k - 2]
    return out


def lsvk_shape(x):
    """The limit shape of Plancherel-random diagrams; equals |x| for |x| >= 2."""
    x = np.asarray(x, dtype=float)
    out = np.abs(x).astype(float)
    inside = out < 2.0
    xi = x[inside] if x.ndim else (x if inside else None)
    if x.ndim:
        out[inside] = (2.0 / np.pi) * (
            xi * np.arcsin(xi / 2.0) + np.sqrt(4.0 - xi ** 2)
        )
        return out
    if inside:
        return float((2.0 / np.pi) * (x * np.arcsin(x / 2.0) + np.sqrt(4.0 - x ** 2)))
    return float(out)


def gauss_nodes(measure: ReferenceMeasure, n_nodes: int):
    """Gauss quadrature rule for the reference measure, as an atomic measure.

    Exact for polynomials of degree <= 2 * n_nodes - 1.
    """
    from .interlacing import AtomicMeasure

    if n_nodes < 1:
        raise ValueError("quadrature rule needs at least one node")
    j = np.arange(1, n_nodes + 1, dtype=float)
    if measure is ReferenceMeasure.SEMICIRCLE:
        theta = j * np.pi / (n_nodes + 1)
        nodes = 2.0 * np.cos(theta)
        weights = (2.0 / (n_nodes + 1)) * np.sin(theta) ** 2
    else:
        theta = (2.0 * j - 1.0) * np.pi / (2.0 * n_nodes)
        nodes = 2.0 * np.cos(theta)
        weights = np.full(n_nodes, 1.0 / n_nodes)
    order = np.argsort(nodes)
    return AtomicMeasure(nodes[order], weights[order])


def validate_reference_rule(measure: ReferenceMeasure, n_nodes: int,
                            tol: float = 1e-12) -> None:
    """Check the node formulas against the exact moments 0..6.

    Called at the start of experiments that rely on the discretization.
    """
    rule = gauss_nodes(measure, n_nodes)
    for k in range(7):
        if 2 * n_nodes - 1 < k:
            break
        got = float(np.dot(rule.weights, rule.atoms ** k))
        want = measure.exact_moment(k)
        if abs(got - want) > tol * max(1.0, abs(want)):
            raise AssertionError(
                f"{measure.value} rule with {n_nodes} nodes fails moment {k}: "
                f"{got} != {want}"
            )


def cheb_moments(measure, kind: ChebKind, k_max: int) -> ChebCoeffs:
    """Moments ``sum_j p_j P_k(a_j / 2)`` for ``k = 0..k_max``."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    table = cheb_table(kind, k_max, measure.atoms / 2.0)
    return ChebCoeffs(kind, table @ measure.weights)


def stieltjes(measure, z: complex) -> complex:
    """Stieltjes transform ``sum_j p_j / (a_j - z)`` of an atomic measure."""
    z = complex(z)
    diff = measure.atoms - z
    if np.any(diff == 0):
        raise ValueError("z coincides with an atom")
    return complex(np.sum(measure.weights / diff))


def sqrt_z2m4(z):
    """Branch of sqrt(z^2 - 4) analytic off [-2, 2] with sqrt ~ z at infinity."""
    z = np.asarray(z, dtype=complex)
    out = np.sqrt(z - 2.0) * np.sqrt(z + 2.0)
    return out if out.ndim else complex(out)


def stieltjes_semicircle(z):
    """Closed form ``(-z + sqrt(z^2 - 4)) / 2`` of the semicircle transform."""
    z = np.asarray(z, dtype=complex)
    out = (-z + sqrt_z2m4(z)) / 2.0
    return out if out.ndim else complex(out)


def stieltjes_arcsine_tk(k: int, z):
    """Transform of ``T_k(x/2) d rho_arcsin``: ``-((z - sqrt(z^2-4))/2)^k / sqrt(z^2-4)``."""
    z = np.asarray(z, dtype=complex)
    s = sqrt_z2m4(z)
    out = -(((z - s) / 2.0) ** k) / s
    return out if out.ndim else complex(out)


def semicircle_tk_moment(k: int) -> float:
    """``int T_k(x/2) d rho_sc``: 1, 0, -1/2, 0, 0, ... (from 2 T_k = U_k - U_{k-2})."""
    if k == 0:
        return 1.0
    if k == 2:
        return -0.5
    return 0.0
